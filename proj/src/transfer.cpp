#include "fpfree/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "fpfree/bodies.hpp"

namespace fpf {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

double ModulusTable::eval(double x) const {
  if (t.empty()) throw std::logic_error("ModulusTable: empty");
  if (x <= 0.0) return 0.0;
  if (x <= t.front()) return w.front() * (x / t.front());
  if (x >= t.back()) return w.back();
  auto it = std::upper_bound(t.begin(), t.end(), x);
  const size_t i = size_t(it - t.begin());
  const double f = (x - t[i - 1]) / (t[i] - t[i - 1]);
  return w[i - 1] + f * (w[i] - w[i - 1]);
}

Modulus Modulus::lipschitz(double L) {
  Modulus m;
  m.kind = Kind::Lipschitz;
  m.lip = L;
  return m;
}

Modulus Modulus::holder(double alpha, double lambda) {
  Modulus m;
  m.kind = Kind::Holder;
  m.alpha = alpha;
  m.lambda = lambda;
  return m;
}

Modulus Modulus::from_table(ModulusTable tab) {
  Modulus m;
  m.kind = Kind::Table;
  m.table = std::move(tab);
  return m;
}

double Modulus::bound(double t) const {
  switch (kind) {
    case Kind::Lipschitz:
      return lip * t;
    case Kind::Holder:
      return lambda * std::pow(t, alpha);
    case Kind::Table:
      return table.eval(t);
  }
  return 0.0;
}

std::string Modulus::label() const {
  switch (kind) {
    case Kind::Lipschitz:
      return "lipschitz(" + fmt_num(lip) + ")";
    case Kind::Holder:
      return "holder(" + fmt_num(alpha) + "," + fmt_num(lambda) + ")";
    case Kind::Table:
      return "table[" + std::to_string(table.t.size()) + "]";
  }
  return "?";
}

Coeffs radial_retract(const Coeffs& x, double r, const SpaceSpec& s) {
  if (!(r > 0.0)) throw std::invalid_argument("radial_retract: r must be positive");
  const double n = norm(x, s);
  if (n <= r) return x;
  return scale(x, r / n);
}

MapHandle scale_map(const MapHandle& S, double r, double holder_alpha) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("scale_map: r in (0,1]");
  MapHandle out = S;
  out.name = S.name + "@r=" + fmt_num(r);
  out.domain = "ball(" + fmt_num(r) + ")";
  const auto inner = S.eval;
  const SpaceSpec sp = S.space;
  const double inv = 1.0 / r;
  out.eval = [inner, sp, r, inv](const Coeffs& x) {
    if (norm(x, sp) > r * (1.0 + 1e-9))
      throw std::domain_error("scale_map: input outside B(r)");
    return scale(inner(scale(x, inv)), r);
  };
  if (holder_alpha > 0.0 && S.declared.kind == Modulus::Kind::Lipschitz) {
    // ||S_r x - S_r y|| <= L ||x-y|| and the domain has diameter 2r, so
    // L t = L t^a t^(1-a) <= 2 L r^(1-a) t^a
    out.declared = Modulus::holder(holder_alpha,
                                   2.0 * S.declared.lip * std::pow(r, 1.0 - holder_alpha));
  }
  if (S.witness_seed) out.witness_seed = scale(*S.witness_seed, r);
  return out;
}

MapHandle shrink_map(const MapHandle& G, double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("shrink_map: lambda in [0,1)");
  MapHandle out = G;
  out.name = G.name + "@shrink=" + fmt_num(lambda);
  const auto inner = G.eval;
  out.eval = [inner, lambda](const Coeffs& x) {
    return add(scale(inner(x), 1.0 - lambda), scale(x, lambda));
  };
  if (G.declared.kind == Modulus::Kind::Lipschitz)
    out.declared = Modulus::lipschitz((1.0 - lambda) * G.declared.lip + lambda);
  return out;
}

MapHandle compose_with_retraction(const MapHandle& F,
                                  std::function<Coeffs(const Coeffs&)> R,
                                  const std::string& retraction_name,
                                  const Modulus& retraction_modulus) {
  MapHandle out = F;
  out.name = F.name + "@" + retraction_name;
  out.domain = "ball";
  const auto f = F.eval;
  out.eval = [f, R](const Coeffs& x) { return f(R(x)); };
  ModulusTable tab;
  tab.t = default_t_grid();
  for (double t : tab.t) tab.w.push_back(F.declared.bound(retraction_modulus.bound(t)));
  out.declared = Modulus::from_table(std::move(tab));
  return out;
}

MapHandle make_lin_handle(const SpaceSpec& s) {
  MapHandle h;
  h.name = "lin:" + s.label();
  h.domain = "cap";
  h.space = s;
  // the safe published constant is 4(D+2) = 12; sampled ratios stay below 8,
  // which is the value the certification suite pins
  h.declared = Modulus::lipschitz(8.0);
  h.fixed_point_free = true;
  h.witness_seed = Coeffs::zero();
  const MonotoneCap cap = monotone_cap(s);
  h.eval = [cap](const Coeffs& x) { return f_map(x, cap); };
  return h;
}

MapHandle make_affine_handle(double q) {
  MapHandle h;
  h.name = "affine:q=" + fmt_num(q);
  h.domain = "cube";
  h.space = SpaceSpec::sup();
  h.declared = Modulus::lipschitz(1.0);
  h.uniform = true;  // every iterate is a diagonal affine contraction-to-1
  h.fixed_point_free = true;
  h.witness_seed = Coeffs::zero();
  AffineDiagonal f;
  f.schedule = AlphaSchedule::one_minus_geometric(q);
  h.eval = [f](const Coeffs& x) { return f.apply(x); };
  return h;
}

namespace {

//! Heavy state of the ThmM4 pipeline: the solved flat set, its 4-dimensional
//! truncation, and the net hierarchy over the truncation.  Held behind a
//! shared_ptr because NetHierarchy references the body member.
struct ThmM4State {
  FlatSet set;
  pou::FlatImageBody body;
  pou::NetHierarchy hier;

  ThmM4State(const FlatWeights& w, double mu)
      : set{w, mu, SpaceSpec::l2(), 48},
        body("thm-flat", w, mu, 4),
        hier(body, w.schedule, pou::HierarchyParams{-2, 9, 8.0, 2}) {}
  ThmM4State(const ThmM4State&) = delete;
};

MapHandle build_thm_m4(double alpha, double lambda) {
  const ThmM4Recipe rec = thm_m4_recipe(alpha, lambda);
  const RSchedule sched = rec.weights.schedule;
  const FlatWeights& w = rec.weights;
  const double mu = rec.mu;

  auto st = std::make_shared<ThmM4State>(w, mu);
  MapHandle h;
  h.name = "thmM4:alpha=" + fmt_num(alpha);
  h.domain = "ball";
  h.space = SpaceSpec::l2();
  h.declared = Modulus::holder(alpha, lambda);
  h.uniform = true;
  h.fixed_point_free = true;
  h.iterate_envelope = std::make_pair(sched, alpha);
  {
    WPoint seed;
    seed.budget = mu;
    seed.t = {0.0, mu};
    h.witness_seed = st->set.w_to_x(seed);
  }
  h.eval = [st](const Coeffs& x) {
    if (auto p = st->set.x_to_w(x)) return st->set.w_to_x(st->set.shift(*p));
    if (norm(x, st->set.space) > 1.0 + 1e-9)
      throw std::domain_error("thmM4: input outside the unit ball");
    // outside the set: retract its ambient truncation onto the body, which
    // lands exactly on a simplex point, then take the shift step there
    const pou::Vec rv = st->hier.retract(x.dense(st->body.dim()));
    const auto p = st->set.x_to_w(Coeffs::from_dense(rv));
    if (!p) throw std::runtime_error("thmM4: retraction missed the flat set");
    return st->set.w_to_x(st->set.shift(*p));
  };
  return h;
}

MapHandle build_ball_pipeline(double alpha, double lambda, bool hilbert) {
  const SpaceSpec l2 = SpaceSpec::l2();
  const MonotoneCap cap = monotone_cap(l2);
  const BallPipelineRecipe rec = ball_pipeline_recipe(alpha, lambda, hilbert);

  MapHandle g0;
  g0.name = hilbert ? "lin:l2@project" : "lin:l2@minretract";
  g0.domain = "ball";
  g0.space = l2;
  g0.declared = Modulus::lipschitz(rec.source_lip);
  g0.fixed_point_free = true;
  if (hilbert) {
    g0.eval = [cap](const Coeffs& x) { return f_map(project_cap_l2(x), cap); };
  } else {
    g0.eval = [cap, l2](const Coeffs& x) { return f_map(retract_monotone(x, l2), cap); };
  }

  MapHandle g1 = shrink_map(g0, rec.lambda0);
  g1.declared = Modulus::lipschitz(2.0);

  const double r = rec.r;
  MapHandle inner = scale_map(g1, r, alpha);
  MapHandle out = inner;
  out.name = std::string(hilbert ? "hilbert" : "linball") + ":alpha=" + fmt_num(alpha);
  out.domain = "ball";
  const auto ev = inner.eval;
  out.eval = [ev, r, l2](const Coeffs& x) { return ev(radial_retract(x, r, l2)); };
  out.declared = Modulus::holder(alpha, 2.0 * 2.0 * std::pow(r, 1.0 - alpha));
  out.witness_seed = Coeffs::zero();
  return out;
}

}  // namespace

MapHandle build_holder_free_map(double alpha, double lambda, HolderSource source) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("build_holder_free_map: alpha in (0,1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("build_holder_free_map: lambda > 0");
  switch (source) {
    case HolderSource::ThmM4:
      return build_thm_m4(alpha, lambda);
    case HolderSource::Hilbert:
      return build_ball_pipeline(alpha, lambda, true);
    case HolderSource::LinBall:
      return build_ball_pipeline(alpha, lambda, false);
  }
  throw std::invalid_argument("build_holder_free_map: unknown source");
}

ThmM4Recipe thm_m4_recipe(double alpha, double lambda) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("thm_m4_recipe: alpha in (0,1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("thm_m4_recipe: lambda > 0");
  ThmM4Recipe rec;
  rec.weights = solve_alphas(RSchedule::holder(alpha));
  // theta-Holder retraction of the flat set, theta = (1+alpha)/2, costs
  // 1520*20^(2-theta); the diameter 2*mu raised to 1-alpha/theta must absorb it.
  const double theta = 0.5 * (1.0 + alpha);
  const double gamma = alpha / theta;
  const double need = lambda / (1520.0 * std::pow(20.0, 2.0 - theta));
  rec.mu = 1.0;
  while (std::pow(2.0 * rec.mu, 1.0 - gamma) > need) {
    rec.mu *= 0.5;
    if (rec.mu < 1e-300)
      throw SolverError("thm_m4_recipe: no representable mu for lambda=" +
                        fmt_num(lambda));
  }
  return rec;
}

BallPipelineRecipe ball_pipeline_recipe(double alpha, double lambda, bool hilbert) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ball_pipeline_recipe: alpha in (0,1)");
  if (!(lambda > 0.0))
    throw std::invalid_argument("ball_pipeline_recipe: lambda > 0");
  BallPipelineRecipe rec;
  rec.source_lip = hilbert ? 8.0 : 16.0;
  // averaging weight with (1-l0) L0 + l0 = 2, so the shrunk map is 2-Lipschitz
  rec.lambda0 = (rec.source_lip - 2.0) / (rec.source_lip - 1.0);
  rec.r = 1.0;
  while (2.0 * 2.0 * std::pow(rec.r, 1.0 - alpha) > lambda) {
    rec.r *= 0.5;
    if (rec.r < 1e-300)
      throw SolverError("ball_pipeline_recipe: no representable radius for lambda=" +
                        fmt_num(lambda));
  }
  return rec;
}

OrbitGaps orbit_gaps(const MapHandle& f, const Coeffs& seed, int steps) {
  OrbitGaps out;
  out.min_displacement = std::numeric_limits<double>::infinity();
  Coeffs cur = seed;
  for (int k = 0; k < steps; ++k) {
    Coeffs nxt = f.eval(cur);
    const double d = dist(nxt, cur, f.space);
    out.gaps.push_back(d);
    out.min_displacement = std::min(out.min_displacement, d);
    cur = std::move(nxt);
  }
  return out;
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int k = -20; k <= 1; ++k) t.push_back(std::ldexp(1.0, k));
  return t;
}

}  // namespace fpf
