#include "fpfree/pou.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fpfree/rng.hpp"

namespace fpf::pou {

double vec_norm(const Vec& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

double vec_dist(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_dist: dimension mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

int level_index(double eps, const RSchedule& sched) {
  if (!(eps > 0.0)) throw std::invalid_argument("level_index: eps must be positive");
  for (int n = 0; n <= 100000; ++n)
    if (sched.r(n) <= eps) return n;
  throw std::runtime_error("level_index: schedule does not reach eps");
}

bool ConvexBody::contains(const Vec& x, double tol) const {
  return distance(x) <= tol;
}

double ConvexBody::max_norm() const {
  double best = 0.0;
  for (const auto& v : vertices()) best = std::max(best, vec_norm(v));
  return best;
}

std::vector<double> body_heights(const ConvexBody& K, int up_to) {
  std::vector<double> h;
  const auto verts = K.vertices();
  for (int n = 0; n <= up_to; ++n) {
    double worst = 0.0;
    for (const auto& v : verts) worst = std::max(worst, K.slice_distance(v, n));
    h.push_back(worst);
  }
  return h;
}

std::vector<Vec> greedy_net(const std::vector<Vec>& samples, double eps) {
  if (samples.empty()) return {};
  std::vector<Vec> net{samples.front()};
  std::vector<double> d(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) d[i] = vec_dist(samples[i], net[0]);
  for (;;) {
    size_t far = 0;
    for (size_t i = 1; i < samples.size(); ++i)
      if (d[i] > d[far]) far = i;
    if (!(d[far] > eps)) break;  // everything within eps of the net: done
    net.push_back(samples[far]);
    for (size_t i = 0; i < samples.size(); ++i)
      d[i] = std::min(d[i], vec_dist(samples[i], net.back()));
  }
  return net;
}

NetHierarchy::NetHierarchy(const ConvexBody& body, const RSchedule& sched,
                           HierarchyParams params)
    : body_(body), sched_(sched), params_(params) {
  if (params_.m_min > params_.m_max)
    throw std::invalid_argument("NetHierarchy: empty level range");
  if (body_.max_norm() > 1.0 + 1e-12)
    throw std::invalid_argument("NetHierarchy: body must sit inside the unit ball");
  for (int m = params_.m_min; m <= params_.m_max; ++m) {
    NetLevel lvl;
    lvl.m = m;
    lvl.eps = std::ldexp(1.0, -m);
    lvl.slice_n = std::min(level_index(lvl.eps, sched_), body_.dim());
    lvl.pitch = lvl.eps / params_.sample_factor;
    if (lvl.slice_n == 0) {
      lvl.points = {Vec(size_t(body_.dim()), 0.0)};
    } else {
      lvl.points = greedy_net(body_.sample_slice(lvl.slice_n, lvl.pitch), lvl.eps);
    }
    levels_.emplace(m, std::move(lvl));
  }
}

bool NetHierarchy::has_level(int m) const { return levels_.count(m) > 0; }

const NetLevel& NetHierarchy::level(int m) const {
  auto it = levels_.find(m);
  if (it == levels_.end()) throw std::out_of_range("NetHierarchy: level not materialized");
  return it->second;
}

double NetHierarchy::coverage_lo() const {
  return std::ldexp(1.0, -params_.m_max) * 0.51;
}

double NetHierarchy::coverage_hi() const {
  return std::ldexp(1.0, -(params_.m_min - 1)) * 1.40;
}

std::vector<NetHierarchy::CellWeight> NetHierarchy::cell_weights(const Vec& x) const {
  const int d = body_.dim();
  if (int(x.size()) != d) throw std::invalid_argument("cell_weights: dimension mismatch");
  const double dist_x = body_.distance(x);
  std::vector<CellWeight> rows;
  if (dist_x <= 0.0) return rows;

  const int G = params_.grid_per_axis;
  for (const auto& [m, lvl] : levels_) {
    const double eps = lvl.eps;
    const double eps_next = eps * 0.5;
    const double eps_prev = eps * 2.0;
    // necessity window: any x carrying weight at level m has
    // d(x,K) in [eps - eps/2, 2 eps + eps/2)
    if (!(dist_x >= eps - eps_next && dist_x < eps_prev + eps_next)) continue;

    const double step = eps_next / double(G);
    std::vector<double> cell_min(lvl.points.size(),
                                 std::numeric_limits<double>::infinity());
    // one pass over the local grid classifies every sample: shell membership
    // by exact distance, then nearest net point (lowest index wins ties)
    std::vector<int> g(size_t(d), -G);
    Vec y(size_t(d), 0.0);
    bool done = false;
    while (!done) {
      double off2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double o = step * double(g[size_t(a)]);
        y[size_t(a)] = x[size_t(a)] + o;
        off2 += o * o;
      }
      const double dy = body_.distance(y);
      if (dy >= eps && dy < eps_prev) {
        size_t best = 0;
        double bd = vec_dist(y, lvl.points[0]);
        for (size_t i = 1; i < lvl.points.size(); ++i) {
          const double cd = vec_dist(y, lvl.points[i]);
          if (cd < bd) {
            bd = cd;
            best = i;
          }
        }
        cell_min[best] = std::min(cell_min[best], std::sqrt(off2));
      }
      for (int a = 0;; ++a) {
        if (a == d) {
          done = true;
          break;
        }
        if (++g[size_t(a)] <= G) break;
        g[size_t(a)] = -G;
      }
    }
    for (size_t i = 0; i < cell_min.size(); ++i) {
      const double sigma = eps_next - cell_min[i];
      if (sigma > 0.0) {
        CellWeight w;
        w.m = m;
        w.idx = int(i);
        w.sigma = sigma;
        w.center = lvl.points[i];
        rows.push_back(std::move(w));
      }
    }
  }

  double total = 0.0;
  for (const auto& w : rows) total += w.sigma;
  if (!(total > 0.0))
    throw std::out_of_range("cell_weights: d(x,K) outside the covered dyadic window");
  for (auto& w : rows) w.phi = w.sigma / total;
  return rows;
}

Vec NetHierarchy::retract(const Vec& x) const {
  if (body_.contains(x)) return x;
  const auto rows = cell_weights(x);
  Vec out(size_t(body_.dim()), 0.0);
  for (const auto& w : rows)
    for (size_t a = 0; a < out.size(); ++a) out[a] += w.phi * w.center[a];
  return out;
}

std::vector<Vec> sample_exterior(const ConvexBody& K, int count, double d_lo,
                                 double d_hi, uint64_t seed) {
  if (!(d_lo > 0.0 && d_hi > d_lo)) throw std::invalid_argument("sample_exterior: bad range");
  Rng rng(seed);
  const Vec lo = K.bbox_lo();
  const Vec hi = K.bbox_hi();
  const double pad = 1.2 * d_hi;
  std::vector<Vec> out;
  out.reserve(size_t(count));
  const long budget = 2000L * count;
  Vec x(lo.size());
  for (long tries = 0; tries < budget && int(out.size()) < count; ++tries) {
    for (size_t a = 0; a < x.size(); ++a)
      x[a] = rng.uniform(lo[a] - pad, hi[a] + pad);
    const double d = K.distance(x);
    if (d >= d_lo && d <= d_hi) out.push_back(x);
  }
  if (int(out.size()) < count)
    throw std::runtime_error("sample_exterior: rejection starved, widen the band");
  return out;
}

std::vector<ModulusPoint> modulus_estimate(const NetHierarchy& H,
                                           const std::vector<Vec>& pool,
                                           const std::vector<double>& t_grid,
                                           int climbs, int climb_steps,
                                           uint64_t seed) {
  if (t_grid.empty()) throw std::invalid_argument("modulus_estimate: empty grid");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("modulus_estimate: grid must increase");

  std::vector<Vec> rx(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) rx[i] = H.retract(pool[i]);

  auto bucket_of = [&](double t) -> int {
    // smallest grid value >= t; pairs wider than the last bucket are dropped
    auto it = std::lower_bound(t_grid.begin(), t_grid.end(), t);
    if (it == t_grid.end()) return -1;
    return int(it - t_grid.begin());
  };

  std::vector<double> best(t_grid.size(), 0.0);
  struct Pair {
    size_t i, j;
    double ratio;
  };
  std::vector<Pair> tops;
  for (size_t i = 0; i < pool.size(); ++i) {
    for (size_t j = i + 1; j < pool.size(); ++j) {
      const double t = vec_dist(pool[i], pool[j]);
      const int b = bucket_of(t);
      if (b < 0) continue;
      const double w = vec_dist(rx[i], rx[j]);
      best[size_t(b)] = std::max(best[size_t(b)], w);
      tops.push_back({i, j, w / std::max(t, 1e-300)});
    }
  }
  std::sort(tops.begin(), tops.end(),
            [](const Pair& a, const Pair& b) { return a.ratio > b.ratio; });
  if (int(tops.size()) > climbs) tops.resize(size_t(climbs));

  // refinement: nudge both endpoints, keep the pair inside its bucket and the
  // covered window, accept when the image gap grows
  Rng rng(seed);
  const double lo = H.coverage_lo(), hi = H.coverage_hi();
  for (const auto& p : tops) {
    Vec x = pool[p.i], y = pool[p.j];
    Vec rxc = rx[p.i], ryc = rx[p.j];
    double t = vec_dist(x, y);
    const int b = bucket_of(t);
    if (b < 0) continue;
    const double cap = t_grid[size_t(b)];
    double gap = vec_dist(rxc, ryc);
    double radius = 0.25 * cap;
    for (int s = 0; s < climb_steps; ++s) {
      Vec xn = x, yn = y;
      Vec& target = (rng.next() & 1u) ? xn : yn;
      for (auto& v : target) v += rng.uniform(-radius, radius);
      if (vec_dist(xn, yn) > cap) continue;
      const double dx = H.body().distance(xn);
      const double dy = H.body().distance(yn);
      if ((dx > 0.0 && (dx < lo || dx > hi)) || (dy > 0.0 && (dy < lo || dy > hi)))
        continue;
      const Vec rxn = H.retract(xn);
      const Vec ryn = H.retract(yn);
      const double g = vec_dist(rxn, ryn);
      if (g > gap) {
        x = xn;
        y = yn;
        rxc = rxn;
        ryc = ryn;
        gap = g;
      } else {
        radius *= 0.9;
      }
    }
    best[size_t(b)] = std::max(best[size_t(b)], gap);
  }

  std::vector<ModulusPoint> out(t_grid.size());
  double run = 0.0;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    run = std::max(run, best[i]);  // omega is nondecreasing in t
    out[i] = {t_grid[i], run};
  }
  return out;
}

}  // namespace fpf::pou
