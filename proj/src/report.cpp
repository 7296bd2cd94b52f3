#include "fpfree/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fpfree/bodies.hpp"
#include "fpfree/csv.hpp"
#include "fpfree/cube.hpp"
#include "fpfree/flat.hpp"
#include "fpfree/lin.hpp"
#include "fpfree/pou.hpp"
#include "fpfree/rng.hpp"
#include "fpfree/svg.hpp"
#include "fpfree/targets.hpp"
#include "fpfree/transfer.hpp"

namespace fs = std::filesystem;

namespace fpf {

std::string library_version() { return "0.1.0"; }

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! One certified inequality: pass iff observed <= bound * bound_scale.
struct Verdict {
  std::string check;
  double observed = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct ExperimentOutput {
  std::vector<std::string> data_header;
  std::vector<std::vector<std::string>> data_rows;
  std::vector<Verdict> verdicts;
  std::vector<SvgSeries> series;
  std::string plot_title;
};

void add_verdict(ExperimentOutput& out, const std::string& check, double observed,
                 double bound, double scale) {
  Verdict v;
  v.check = check;
  v.observed = observed;
  v.bound = bound;
  v.pass = observed <= bound * scale;
  out.verdicts.push_back(std::move(v));
}

std::string itos(long v) { return std::to_string(v); }

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> k = {"ar-decay",     "lipschitz-estimate",
                                          "holder-modulus", "flatness",
                                          "displacement", "retraction-check"};
  return k;
}

std::string target_family(const std::string& target) {
  const auto colon = target.find(':');
  return colon == std::string::npos ? target : target.substr(0, colon);
}

//! Pull one numeric parameter back out of an already-validated target name.
double target_param(const std::string& target, const std::string& key,
                    double fallback) {
  const auto pos = target.find(key + "=");
  if (pos == std::string::npos) return fallback;
  return std::stod(target.substr(pos + key.size() + 1));
}

// ---- deterministic samplers -------------------------------------------------

Coeffs random_cap_point(Rng& rng, const SpaceSpec& s, int support) {
  const int n = 1 + rng.uniform_int(0, support - 1);
  std::vector<double> v(size_t(n), 0.0);
  for (auto& t : v) t = rng.uniform();
  std::sort(v.rbegin(), v.rend());
  Coeffs x = Coeffs::from_dense(v);
  const double nr = norm(x, s);
  if (nr > 0.0) x = scale(x, rng.uniform() / nr);
  return x;
}

Coeffs random_cube_point(Rng& rng, int support) {
  std::vector<double> v(size_t(support), 0.0);
  for (auto& t : v) t = rng.uniform();
  return Coeffs::from_dense(v);
}

//! Signed vector with ||x|| uniform in [r_lo, r_hi], support in 1..support.
Coeffs random_ball_point(Rng& rng, const SpaceSpec& s, int support, double r_lo,
                         double r_hi) {
  std::vector<double> v(size_t(support), 0.0);
  const int active = 1 + rng.uniform_int(0, support - 1);
  for (int j = 0; j < active; ++j)
    v[size_t(rng.uniform_int(0, support - 1))] = rng.uniform(-1.0, 1.0);
  Coeffs x = Coeffs::from_dense(v);
  const double nr = norm(x, s);
  if (nr == 0.0) return scale(Coeffs::unit(1), rng.uniform(r_lo, r_hi));
  return scale(x, rng.uniform(r_lo, r_hi) / nr);
}

// ---- map experiments --------------------------------------------------------

//! Shared core of ar-decay and displacement on the normalized cap map: walk
//! orbits and compare each gap against 1/Phi(n) + the measured tail term.
ExperimentOutput lin_ar_decay(const ExperimentConfig& cfg, const MapHandle& h) {
  ExperimentOutput out;
  out.data_header = {"seed", "n", "gap", "bound"};
  out.plot_title = "ar-decay " + cfg.target;
  const MonotoneCap K = monotone_cap(h.space);
  const int H = int(std::min<long>(cfg.horizon, 100000));
  std::map<int, double> gap_max, bound_min;
  Rng root(cfg.seed);
  for (long sidx = 1; sidx <= cfg.samples; ++sidx) {
    Rng rng = root.split(uint64_t(sidx));
    const Coeffs x0 = random_cap_point(rng, h.space, 64);
    double worst = 0.0;
    orbit_scan(x0, K, H + 2, [&](int k, double gap, double tail) {
      if (k < 2) return;
      const int n = k - 1;
      if (n > H) return;
      const double bound = 1.0 / fundamental_function(n, h.space) + tail;
      out.data_rows.push_back({itos(sidx), itos(n), csv_num(gap), csv_num(bound)});
      worst = std::max(worst, gap / bound);
      auto g = gap_max.find(n);
      if (g == gap_max.end())
        gap_max[n] = gap;
      else
        g->second = std::max(g->second, gap);
      auto b = bound_min.find(n);
      if (b == bound_min.end())
        bound_min[n] = bound;
      else
        b->second = std::min(b->second, bound);
    });
    add_verdict(out, "ar-chain-seed-" + itos(sidx), worst, 1.0, cfg.bound_scale);
  }
  SvgSeries gaps{"gap (max over seeds)", "#d62728", {}, {}};
  SvgSeries bounds{"1/Phi(n)+tail (min)", "#1f77b4", {}, {}};
  for (const auto& [n, g] : gap_max) {
    gaps.x.push_back(n);
    gaps.y.push_back(g);
  }
  for (const auto& [n, b] : bound_min) {
    bounds.x.push_back(n);
    bounds.y.push_back(b);
  }
  out.series = {gaps, bounds};
  return out;
}

ExperimentOutput affine_ar_decay(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.data_header = {"m", "gap", "bound"};
  out.plot_title = "ar-decay " + cfg.target;
  const double q = target_param(cfg.target, "q", 0.5);
  const AffineDiagonal A{AlphaSchedule::one_minus_geometric(q), 48};
  const SpaceSpec sup = SpaceSpec::sup();
  const int H = int(std::min<long>(cfg.horizon, 4096));
  Rng rng(cfg.seed);
  std::vector<Coeffs> pts;
  for (long i = 0; i < cfg.samples; ++i) pts.push_back(random_cube_point(rng, 48));
  SvgSeries gaps{"sup gap (max)", "#d62728", {}, {}};
  SvgSeries bounds{"2 sup a^m(1-a)", "#1f77b4", {}, {}};
  double worst = 0.0;
  for (int m = 1; m <= H; ++m) {
    double gap = 0.0;
    for (const auto& x : pts)
      gap = std::max(gap, dist(A.power(x, m + 1), A.power(x, m), sup));
    const double bound = uniform_ar_bound(A.schedule, m);
    out.data_rows.push_back({itos(m), csv_num(gap), csv_num(bound)});
    worst = std::max(worst, gap / bound);
    gaps.x.push_back(m);
    gaps.y.push_back(gap);
    bounds.x.push_back(m);
    bounds.y.push_back(bound);
  }
  add_verdict(out, "ar-uniform-bound", worst, 1.0, cfg.bound_scale);
  out.series = {gaps, bounds};
  return out;
}

ExperimentOutput lipschitz_estimate(const ExperimentConfig& cfg, const MapHandle& h) {
  if (h.declared.kind != Modulus::Kind::Lipschitz)
    throw ConfigError("target '" + cfg.target +
                      "' declares a Holder modulus; use holder-modulus");
  ExperimentOutput out;
  out.data_header = {"i", "t", "ratio"};
  out.plot_title = "lipschitz-estimate " + cfg.target;
  const bool cube = h.domain == "cube";
  Rng rng(cfg.seed);
  double worst = 0.0;
  SvgSeries pts{"ratio", "#d62728", {}, {}};
  long row = 0;
  for (long i = 1; i <= cfg.samples; ++i) {
    const Coeffs x = cube ? random_cube_point(rng, 48)
                          : random_cap_point(rng, h.space, 64);
    const Coeffs y = cube ? random_cube_point(rng, 48)
                          : random_cap_point(rng, h.space, 64);
    const double t = dist(x, y, h.space);
    if (t < 1e-12) continue;
    const double ratio = dist(h(x), h(y), h.space) / t;
    out.data_rows.push_back({itos(++row), csv_num(t), csv_num(ratio)});
    worst = std::max(worst, ratio);
    pts.x.push_back(double(row));
    pts.y.push_back(ratio);
  }
  add_verdict(out, "lipschitz-ratio", worst, h.declared.lip, cfg.bound_scale);
  SvgSeries lim{"declared constant", "#1f77b4", {}, {}};
  if (!pts.x.empty()) {
    lim.x = {pts.x.front(), pts.x.back()};
    lim.y = {h.declared.lip, h.declared.lip};
  }
  out.series = {pts, lim};
  return out;
}

//! Pair sampler for the truncated flat-set pipeline: both points stay inside
//! the unit ball with a leading 4-dim projection well inside the net
//! hierarchy's covered distance window.
std::pair<Coeffs, Coeffs> thm_pair(Rng& rng) {
  const SpaceSpec l2 = SpaceSpec::l2();
  const auto head_norm = [&l2](const Coeffs& v) {
    return norm(Coeffs::from_dense(v.dense(4)), l2);
  };
  for (int tries = 0; tries < 200; ++tries) {
    const Coeffs x = add(random_ball_point(rng, l2, 4, 0.05, 0.6),
                         random_ball_point(rng, l2, 16, 0.0, 0.4));
    const Coeffs y = add(x, random_ball_point(rng, l2, 16, 0.0, 0.4));
    if (head_norm(x) < 0.02 || head_norm(y) < 0.02) continue;
    if (norm(x, l2) > 1.0 || norm(y, l2) > 1.0) continue;
    return {x, y};
  }
  return {scale(Coeffs::unit(1), 0.25), scale(Coeffs::unit(1), 0.5)};
}

ExperimentOutput map_holder_modulus(const ExperimentConfig& cfg, const MapHandle& h) {
  if (h.declared.kind != Modulus::Kind::Holder)
    throw ConfigError("target '" + cfg.target +
                      "' declares a Lipschitz modulus; use lipschitz-estimate");
  ExperimentOutput out;
  out.data_header = {"t", "omega", "bound"};
  out.plot_title = "holder-modulus " + cfg.target;
  const bool flat = target_family(cfg.target) == "thmM4";
  const std::vector<double> grid = default_t_grid();
  std::vector<double> omega(grid.size(), 0.0);
  Rng rng(cfg.seed);
  double worst = 0.0;
  for (long i = 1; i <= cfg.samples; ++i) {
    Coeffs x, y;
    if (flat) {
      std::tie(x, y) = thm_pair(rng);
    } else {
      x = random_ball_point(rng, h.space, 16, 0.0, 1.0);
      const double t_target = grid[size_t(rng.uniform_int(0, int(grid.size()) - 1))];
      const Coeffs delta =
          random_ball_point(rng, h.space, 16, 0.5 * t_target, t_target);
      y = add(x, delta);
      const double ny = norm(y, h.space);
      if (ny > 1.0) y = scale(y, 1.0 / ny);
    }
    const double t = dist(x, y, h.space);
    if (t < 1e-15) continue;
    const double gap = dist(h(x), h(y), h.space);
    worst = std::max(worst, gap / h.declared.bound(t));
    const auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it != grid.end()) {
      const size_t b = size_t(it - grid.begin());
      omega[b] = std::max(omega[b], gap);
    }
  }
  for (size_t b = 1; b < omega.size(); ++b)
    omega[b] = std::max(omega[b], omega[b - 1]);  // modulus is nondecreasing
  SvgSeries meas{"omega (measured)", "#d62728", {}, {}};
  SvgSeries bnd{h.declared.label(), "#1f77b4", {}, {}};
  for (size_t b = 0; b < grid.size(); ++b) {
    out.data_rows.push_back(
        {csv_num(grid[b]), csv_num(omega[b]), csv_num(h.declared.bound(grid[b]))});
    meas.x.push_back(grid[b]);
    meas.y.push_back(omega[b]);
    bnd.x.push_back(grid[b]);
    bnd.y.push_back(h.declared.bound(grid[b]));
  }
  add_verdict(out, "holder-pair-ratio", worst, 1.0, cfg.bound_scale);
  out.series = {meas, bnd};
  return out;
}

ExperimentOutput map_displacement(const ExperimentConfig& cfg, const MapHandle& h) {
  ExperimentOutput out;
  out.data_header = {"n", "displacement", "bound"};
  out.plot_title = "displacement " + cfg.target;
  const std::string family = target_family(cfg.target);
  const int H = int(std::min<long>(cfg.horizon, 100000));
  SvgSeries meas{"displacement", "#d62728", {}, {}};
  SvgSeries bnd{"reference", "#1f77b4", {}, {}};

  if (family == "lin") {
    const MonotoneCap K = monotone_cap(h.space);
    double worst = 0.0, min_disp = 0.0, last_bound = 0.0;
    bool any = false;
    orbit_scan(*h.witness_seed, K, H + 2, [&](int k, double gap, double tail) {
      if (k < 2 || k - 1 > H) return;
      const int n = k - 1;
      const double bound = 1.0 / fundamental_function(n, h.space) + tail;
      out.data_rows.push_back({itos(n), csv_num(gap), csv_num(bound)});
      worst = std::max(worst, gap / bound);
      min_disp = any ? std::min(min_disp, gap) : gap;
      any = true;
      last_bound = bound;
      meas.x.push_back(n);
      meas.y.push_back(gap);
      bnd.x.push_back(n);
      bnd.y.push_back(bound);
    });
    add_verdict(out, "displacement-chain", worst, 1.0, cfg.bound_scale);
    add_verdict(out, "min-displacement", min_disp, last_bound, cfg.bound_scale);
  } else if (family == "affine") {
    const double q = target_param(cfg.target, "q", 0.5);
    const AffineDiagonal A{AlphaSchedule::one_minus_geometric(q), 48};
    const SpaceSpec sup = SpaceSpec::sup();
    const Coeffs zero = Coeffs::zero();
    double min_disp = 0.0, last_bound = 0.0, worst = 0.0;
    for (int m = 1; m <= std::min(H, 4096); ++m) {
      const double gap = dist(A.power(zero, m + 1), A.power(zero, m), sup);
      const double bound = uniform_ar_bound(A.schedule, m);
      out.data_rows.push_back({itos(m), csv_num(gap), csv_num(bound)});
      worst = std::max(worst, gap / bound);
      min_disp = m == 1 ? gap : std::min(min_disp, gap);
      last_bound = bound;
      meas.x.push_back(m);
      meas.y.push_back(gap);
      bnd.x.push_back(m);
      bnd.y.push_back(bound);
    }
    add_verdict(out, "displacement-chain", worst, 1.0, cfg.bound_scale);
    add_verdict(out, "min-displacement", min_disp, last_bound, cfg.bound_scale);
  } else if (family == "thmM4") {
    const ThmM4Recipe rec = thm_m4_recipe(target_param(cfg.target, "alpha", 0.5),
                                          target_param(cfg.target, "lambda", 1.0));
    const int steps = std::min(H, 40);
    const OrbitGaps og = orbit_gaps(h, *h.witness_seed, steps);
    double dev = 0.0;
    for (int k = 0; k < int(og.gaps.size()); ++k) {
      const double closed = rec.mu * rec.weights.alpha(k + 2);
      out.data_rows.push_back({itos(k), csv_num(og.gaps[size_t(k)]), csv_num(closed)});
      dev = std::max(dev, std::fabs(og.gaps[size_t(k)] - closed));
      meas.x.push_back(k);
      meas.y.push_back(og.gaps[size_t(k)]);
      bnd.x.push_back(k);
      bnd.y.push_back(closed);
    }
    add_verdict(out, "witness-closed-form", dev, 1e-12, cfg.bound_scale);
    add_verdict(out, "min-displacement", og.min_displacement,
                rec.mu * rec.weights.alpha(2), cfg.bound_scale);
  } else if (family == "hilbert" || family == "linball") {
    const BallPipelineRecipe rec =
        ball_pipeline_recipe(target_param(cfg.target, "alpha", 0.5),
                             target_param(cfg.target, "lambda", 1.0),
                             family == "hilbert");
    const SpaceSpec l2 = SpaceSpec::l2();
    const MonotoneCap K = monotone_cap(l2);
    const OrbitRecord orec = orbit(Coeffs::zero(), K, std::min(H, 4096) + 1);
    double worst = 0.0, min_disp = 0.0, last_bound = 0.0;
    bool any = false;
    // displacement of the ball map at r * (cap-map orbit): the averaging step
    // scales the cap gap by exactly (1 - lambda0), the conjugation by r
    for (int k = 2; k + 1 <= int(orec.iterates.size()); ++k) {
      const Coeffs& z = orec.iterates[size_t(k - 1)];  // F^k of the zero seed
      const Coeffs u = scale(z, rec.r);
      const double disp = dist(h(u), u, l2);
      const double tail = dist(g_map(z, K), z, l2);
      const double bound = rec.r * (1.0 - rec.lambda0) *
                           (1.0 / fundamental_function(k - 1, l2) + tail);
      out.data_rows.push_back({itos(k), csv_num(disp), csv_num(bound)});
      worst = std::max(worst, disp / bound);
      min_disp = any ? std::min(min_disp, disp) : disp;
      any = true;
      last_bound = bound;
      meas.x.push_back(k);
      meas.y.push_back(disp);
      bnd.x.push_back(k);
      bnd.y.push_back(bound);
    }
    add_verdict(out, "displacement-chain", worst, 1.0, cfg.bound_scale);
    add_verdict(out, "min-displacement", min_disp, last_bound, cfg.bound_scale);
  } else {
    throw ConfigError("displacement does not apply to target '" + cfg.target + "'");
  }
  out.series = {meas, bnd};
  return out;
}

//! Measured flat-set heights: distance from sampled simplex points to their
//! slice collapse (suffix and the infinite-support column folded onto the
//! last kept level), against the closed-form 3 mu tail and the radius chain.
ExperimentOutput thm_flatness(const ExperimentConfig& cfg) {
  const ThmM4Recipe rec = thm_m4_recipe(target_param(cfg.target, "alpha", 0.5),
                                        target_param(cfg.target, "lambda", 1.0));
  const FlatSet K{rec.weights, rec.mu, SpaceSpec::l2(), 48};
  ExperimentOutput out;
  out.data_header = {"n", "height", "tail_bound", "r_next"};
  out.plot_title = "flatness " + cfg.target;

  const int depth = 12;
  std::vector<WPoint> pts;
  for (int n = 0; n <= depth; ++n) {
    WPoint p;
    p.budget = rec.mu;
    p.t.assign(size_t(n) + 1, 0.0);
    p.t[size_t(n)] = rec.mu;
    pts.push_back(p);  // the pure profiles attain the sup
  }
  Rng rng(cfg.seed);
  for (long i = 0; i < cfg.samples; ++i) {
    WPoint p;
    p.budget = rec.mu;
    p.t.assign(size_t(depth) + 1, 0.0);
    double total = 0.0;
    for (auto& t : p.t) {
      t = rng.uniform();
      total += t;
    }
    const double f = rec.mu * rng.uniform() / total;
    for (auto& t : p.t) t *= f;
    pts.push_back(p);
  }

  const int N = int(std::min<long>(cfg.horizon, 30));
  SvgSeries meas{"height (measured)", "#d62728", {}, {}};
  SvgSeries tails{"3 mu tail", "#1f77b4", {}, {}};
  SvgSeries rs{"r_{n+1}", "#2ca02c", {}, {}};
  for (int n = 0; n <= N; ++n) {
    double height = 0.0;
    for (const auto& p : pts) height = std::max(height, K.slice_gap(p, n));
    const double tail = K.height_bound(n);
    const double r_next = rec.weights.schedule.r(n + 1);
    out.data_rows.push_back(
        {itos(n), csv_num(height), csv_num(tail), csv_num(r_next)});
    add_verdict(out, "height-vs-tail-n" + itos(n), height, tail, cfg.bound_scale);
    add_verdict(out, "tail-vs-r-n" + itos(n), tail, r_next, cfg.bound_scale);
    meas.x.push_back(n);
    meas.y.push_back(height);
    tails.x.push_back(n);
    tails.y.push_back(tail);
    rs.x.push_back(n);
    rs.y.push_back(r_next);
  }

  const FlatCertificate& cert = rec.weights.certificate;
  double rows_ratio = 0.0;
  for (const auto& r : cert.rows)
    rows_ratio = std::max(rows_ratio, std::max(r.lhs_tail, r.lhs_ratio) / r.rhs);
  add_verdict(out, "eq5-rows", rows_ratio, 1.0, cfg.bound_scale);
  const double tail_ratio =
      std::max({cert.tail_lhs_tail / cert.tail_rhs,
                cert.tail_lhs_ratio / cert.tail_rhs,
                cert.tail_step_ratio / rec.weights.schedule.base});
  add_verdict(out, "eq5-tail", tail_ratio, 1.0, cfg.bound_scale);

  out.series = {meas, tails, rs};
  return out;
}

// ---- body experiments -------------------------------------------------------

ExperimentOutput medina_flatness(const ExperimentConfig& cfg, const MedinaTarget& t) {
  ExperimentOutput out;
  out.data_header = {"n", "height", "r"};
  out.plot_title = "flatness " + cfg.target;
  const auto heights = pou::body_heights(*t.body, t.body->dim());
  SvgSeries meas{"height", "#d62728", {}, {}};
  SvgSeries rs{"r_n", "#1f77b4", {}, {}};
  for (int n = 0; n < int(heights.size()); ++n) {
    const double r = t.schedule.r(n);
    out.data_rows.push_back({itos(n), csv_num(heights[size_t(n)]), csv_num(r)});
    add_verdict(out, "height-n" + itos(n), heights[size_t(n)], r, cfg.bound_scale);
    meas.x.push_back(n);
    meas.y.push_back(heights[size_t(n)]);
    rs.x.push_back(n);
    rs.y.push_back(r);
  }
  out.series = {meas, rs};
  return out;
}

ExperimentOutput medina_holder(const ExperimentConfig& cfg, const MedinaTarget& t) {
  ExperimentOutput out;
  const bool holder = t.schedule.form == RSchedule::Form::Holder;
  out.data_header = holder
                        ? std::vector<std::string>{"t", "omega", "bound_level",
                                                   "bound_holder"}
                        : std::vector<std::string>{"t", "omega", "bound_level"};
  out.plot_title = "holder-modulus " + cfg.target;
  const pou::NetHierarchy H(*t.body, t.schedule, t.params);
  const long pool_n = std::min<long>(cfg.samples, 400);
  std::vector<pou::Vec> pool =
      pou::sample_exterior(*t.body, int(pool_n), t.d_lo, t.d_hi, cfg.seed);
  // seed the pool with in-body points too: the retraction is the identity
  // there, which pins the modulus curve's floor at the pair distance
  const auto verts = t.body->vertices();
  pool.insert(pool.end(), verts.begin(), verts.end());
  const std::vector<double> grid = default_t_grid();
  const auto pts = pou::modulus_estimate(H, pool, grid, 16, 50, cfg.seed);

  SvgSeries meas{"omega (measured)", "#d62728", {}, {}};
  SvgSeries b1{"level bound", "#1f77b4", {}, {}};
  SvgSeries b2{"holder bound", "#2ca02c", {}, {}};
  double worst1 = 0.0, worst2 = 0.0;
  for (const auto& mp : pts) {
    const double bound1 =
        1520.0 * std::pow(20.0, pou::level_index(mp.t / 20.0, t.schedule)) * mp.t;
    std::vector<std::string> row = {csv_num(mp.t), csv_num(mp.omega),
                                    csv_num(bound1)};
    worst1 = std::max(worst1, mp.omega / bound1);
    meas.x.push_back(mp.t);
    meas.y.push_back(mp.omega);
    b1.x.push_back(mp.t);
    b1.y.push_back(bound1);
    if (holder) {
      const double bound2 = 1520.0 * std::pow(20.0, 2.0 - t.schedule.alpha) *
                            std::pow(mp.t, t.schedule.alpha);
      row.push_back(csv_num(bound2));
      worst2 = std::max(worst2, mp.omega / bound2);
      b2.x.push_back(mp.t);
      b2.y.push_back(bound2);
    }
    out.data_rows.push_back(std::move(row));
  }
  add_verdict(out, "omega-vs-level-bound", worst1, 1.0, cfg.bound_scale);
  if (holder) add_verdict(out, "omega-vs-holder-bound", worst2, 1.0, cfg.bound_scale);
  out.series = holder ? std::vector<SvgSeries>{meas, b1, b2}
                      : std::vector<SvgSeries>{meas, b1};
  return out;
}

ExperimentOutput medina_retraction_check(const ExperimentConfig& cfg,
                                         const MedinaTarget& t) {
  ExperimentOutput out;
  out.data_header = {"i", "d", "retract_dist", "cells", "weight_dev"};
  out.plot_title = "retraction-check " + cfg.target;
  const pou::NetHierarchy H(*t.body, t.schedule, t.params);

  for (const auto& [m, lvl] : H.levels()) {
    double min_sep = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < lvl.points.size(); ++i)
      for (size_t j = i + 1; j < lvl.points.size(); ++j)
        min_sep = std::min(min_sep, pou::vec_dist(lvl.points[i], lvl.points[j]));
    if (lvl.points.size() > 1)
      add_verdict(out, "net-separation-m" + itos(m), lvl.eps / min_sep, 1.0,
                  cfg.bound_scale);
    double worst_gap = 0.0;
    for (const auto& s : t.body->sample_slice(lvl.slice_n, lvl.pitch)) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : lvl.points) best = std::min(best, pou::vec_dist(s, p));
      worst_gap = std::max(worst_gap, best);
    }
    add_verdict(out, "net-density-m" + itos(m), worst_gap, lvl.eps + lvl.pitch,
                cfg.bound_scale);
  }

  const auto pool =
      pou::sample_exterior(*t.body, int(cfg.samples), t.d_lo, t.d_hi, cfg.seed);
  double sum_dev = 0.0, nine_d = 0.0, count_ratio = 0.0;
  double rad_low = 0.0, rad_high = 0.0, idem = 0.0, two_point = 0.0;
  std::vector<std::pair<double, double>> scatter;
  pou::Vec prev_r;
  double prev_d = 0.0;
  pou::Vec prev_x;
  for (size_t i = 0; i < pool.size(); ++i) {
    const pou::Vec& x = pool[i];
    const double d = t.body->distance(x);
    const auto cw = H.cell_weights(x);
    double sum = 0.0;
    for (const auto& c : cw) {
      sum += c.phi;
      const double dx = pou::vec_dist(x, c.center);
      rad_low = std::max(rad_low, (d / 5.0) / dx);
      rad_high = std::max(rad_high, dx / (9.0 * d));
    }
    sum_dev = std::max(sum_dev, std::fabs(sum - 1.0));
    const pou::Vec r = H.retract(x);
    const double rd = pou::vec_dist(r, x);
    nine_d = std::max(nine_d, rd / (9.0 * d));
    const double cap = 5.0 * std::pow(20.0, pou::level_index(d / 10.0, t.schedule));
    count_ratio = std::max(count_ratio, double(cw.size()) / cap);
    idem = std::max(idem, pou::vec_dist(H.retract(r), r));
    if (i > 0) {
      const double sep = pou::vec_dist(x, prev_x);
      if (sep > 1e-12) {
        const double allowance =
            760.0 *
            (std::pow(20.0, pou::level_index(d / 10.0, t.schedule)) +
             std::pow(20.0, pou::level_index(prev_d / 10.0, t.schedule))) *
            sep;
        two_point = std::max(two_point, pou::vec_dist(r, prev_r) / allowance);
      }
    }
    prev_r = r;
    prev_d = d;
    prev_x = x;
    out.data_rows.push_back({itos(long(i) + 1), csv_num(d), csv_num(rd),
                             itos(long(cw.size())), csv_num(std::fabs(sum - 1.0))});
    scatter.emplace_back(d, rd);
  }
  add_verdict(out, "weights-sum", sum_dev, 1e-9, cfg.bound_scale);
  add_verdict(out, "retract-9d", nine_d, 1.0, cfg.bound_scale);
  add_verdict(out, "cell-count", count_ratio, 1.0, cfg.bound_scale);
  add_verdict(out, "cell-radius-low", rad_low, 1.0, cfg.bound_scale);
  add_verdict(out, "cell-radius-high", rad_high, 1.0, cfg.bound_scale);
  add_verdict(out, "idempotent", idem, 1e-9, cfg.bound_scale);
  add_verdict(out, "two-point", two_point, 1.0, cfg.bound_scale);

  std::sort(scatter.begin(), scatter.end());
  SvgSeries meas{"|R(x)-x|", "#d62728", {}, {}};
  SvgSeries bnd{"9 d(x,K)", "#1f77b4", {}, {}};
  for (const auto& [d, rd] : scatter) {
    meas.x.push_back(d);
    meas.y.push_back(rd);
    bnd.x.push_back(d);
    bnd.y.push_back(9.0 * d);
  }
  out.series = {meas, bnd};
  return out;
}

// ---- dispatch and file output ----------------------------------------------

ExperimentOutput run_measurements(const ExperimentConfig& cfg) {
  if (!known_experiments().count(cfg.experiment))
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");

  if (is_medina_target(cfg.target)) {
    const MedinaTarget t = make_medina_target(cfg.target);
    if (cfg.experiment == "holder-modulus") return medina_holder(cfg, t);
    if (cfg.experiment == "flatness") return medina_flatness(cfg, t);
    if (cfg.experiment == "retraction-check")
      return medina_retraction_check(cfg, t);
    throw ConfigError("experiment '" + cfg.experiment +
                      "' does not apply to body target '" + cfg.target + "'");
  }

  const MapHandle h = make_map_target(cfg.target);
  const std::string family = target_family(cfg.target);
  if (cfg.experiment == "ar-decay") {
    if (family == "lin") return lin_ar_decay(cfg, h);
    if (family == "affine") return affine_ar_decay(cfg);
    throw ConfigError("ar-decay applies to lin:* and affine:* targets only");
  }
  if (cfg.experiment == "lipschitz-estimate") return lipschitz_estimate(cfg, h);
  if (cfg.experiment == "holder-modulus") return map_holder_modulus(cfg, h);
  if (cfg.experiment == "displacement") return map_displacement(cfg, h);
  if (cfg.experiment == "flatness") {
    if (family == "thmM4") return thm_flatness(cfg);
    throw ConfigError("flatness applies to thmM4:* and medina:* targets only");
  }
  throw ConfigError("experiment '" + cfg.experiment +
                    "' does not apply to map target '" + cfg.target + "'");
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot open '" + p.string() + "' for writing");
  os << content;
  os.flush();
  if (!os) throw IoError("write failed on '" + p.string() + "'");
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");

  std::map<std::string, std::string> manifest;
  manifest["schema"] = cfg.schema;
  manifest["experiment"] = cfg.experiment;
  manifest["target"] = cfg.target;
  manifest["samples"] = itos(cfg.samples);
  manifest["horizon"] = itos(cfg.horizon);
  manifest["seed"] = std::to_string(cfg.seed);
  manifest["out"] = cfg.out_dir;
  manifest["svg"] = cfg.svg ? "true" : "false";
  manifest["bound-scale"] = csv_num(cfg.bound_scale);
  manifest["version"] = library_version();
  std::ostringstream ms;
  for (const auto& [k, v] : manifest) ms << k << '=' << v << '\n';
  write_file(dir / "manifest.txt", ms.str());

  std::ostringstream ds;
  csv_row(ds, out.data_header);
  for (const auto& row : out.data_rows) csv_row(ds, row);
  write_file(dir / "data.csv", ds.str());

  std::ostringstream vs;
  csv_row(vs, {"check", "observed", "bound", "bound_scaled", "verdict"});
  for (const auto& v : out.verdicts)
    csv_row(vs, {v.check, csv_num(v.observed), csv_num(v.bound),
                 csv_num(v.bound * cfg.bound_scale), v.pass ? "pass" : "fail"});
  write_file(dir / "verdicts.csv", vs.str());

  if (cfg.svg && !out.series.empty())
    write_file(dir / "plot.svg", render_svg(out.plot_title, out.series));
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult res;
  res.out_dir = cfg.out_dir;
  ExperimentOutput out;
  try {
    out = run_measurements(cfg);
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.summary = e.what();
    return res;
  } catch (const UnknownTargetError& e) {
    res.exit_code = kExitConfig;
    res.summary = e.what();
    return res;
  } catch (const std::invalid_argument& e) {
    res.exit_code = kExitConfig;
    res.summary = e.what();
    return res;
  } catch (const SolverError& e) {
    res.exit_code = kExitSolver;
    res.summary = e.what();
    return res;
  } catch (const ConvergenceError& e) {
    res.exit_code = kExitSolver;
    res.summary = e.what();
    return res;
  } catch (const std::exception& e) {
    res.exit_code = kExitSolver;
    res.summary = std::string("internal error: ") + e.what();
    return res;
  }

  try {
    write_outputs(cfg, out);
  } catch (const IoError& e) {
    res.exit_code = kExitIo;
    res.summary = e.what();
    return res;
  }

  long failed = 0;
  for (const auto& v : out.verdicts)
    if (!v.pass) ++failed;
  res.exit_code = failed == 0 ? kExitOk : kExitBoundViolation;
  std::ostringstream ss;
  ss << cfg.experiment << " on " << cfg.target << ": "
     << (out.verdicts.size() - size_t(failed)) << "/" << out.verdicts.size()
     << " checks passed";
  res.summary = ss.str();
  return res;
}

}  // namespace fpf
