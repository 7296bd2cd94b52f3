#include "fpfree/lin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpf {

namespace {

double dense_norm(const std::vector<double>& v, const SpaceSpec& s) {
  if (s.kind == SpaceSpec::Norm::Sup) {
    double m = 0.0;
    for (double t : v) m = std::max(m, std::abs(t));
    return m;
  }
  if (s.p == 1.0) {
    double t = 0.0;
    for (double u : v) t += std::abs(u);
    return t;
  }
  if (s.p == 2.0) {
    double t = 0.0;
    for (double u : v) t += u * u;
    return std::sqrt(t);
  }
  double t = 0.0;
  for (double u : v) t += std::pow(std::abs(u), s.p);
  return std::pow(t, 1.0 / s.p);
}

double dense_dist(const std::vector<double>& a, const std::vector<double>& b,
                  const SpaceSpec& s) {
  std::vector<double> d(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double va = i < a.size() ? a[i] : 0.0;
    double vb = i < b.size() ? b[i] : 0.0;
    d[i] = va - vb;
  }
  return dense_norm(d, s);
}

// g on a dense coefficient block; output has one more coordinate
std::vector<double> g_dense(const std::vector<double>& t, const SpaceSpec& s) {
  std::vector<double> g(t.size() + 1);
  double head = t.empty() ? 0.0 : t[0];
  g[0] = std::max(head, 1.0 - dense_norm(t, s));
  for (std::size_t i = 0; i < t.size(); ++i) g[i + 1] = t[i];
  return g;
}

}  // namespace

MonotoneCap monotone_cap(const SpaceSpec& s, double tol) {
  if (!s.is_lp())
    throw std::invalid_argument(
        "monotone cap map needs an unbounded fundamental function; sup-norm "
        "spaces are not accepted");
  return MonotoneCap{s, tol};
}

bool in_cap(const Coeffs& x, const MonotoneCap& K) {
  double prev = std::numeric_limits<double>::infinity();
  int pos = 1;
  for (const auto& e : x.entries) {
    while (pos < e.index) {  // implicit zero
      if (0.0 > prev + K.tol) return false;
      prev = 0.0;
      ++pos;
    }
    if (e.value < -K.tol) return false;
    if (e.value > prev + K.tol) return false;
    prev = e.value;
    ++pos;
  }
  return norm(x, K.space) <= 1.0 + K.tol;
}

Coeffs g_map(const Coeffs& x, const MonotoneCap& K) {
  if (!in_cap(x, K)) throw std::domain_error("g_map: point is not in the cap");
  int n = x.max_index();
  std::vector<double> t = x.dense(n);
  std::vector<double> g = g_dense(t, K.space);
  Coeffs out = Coeffs::from_dense(g);
  out.bound = std::max(x.bound + 1, out.bound);
  return out;
}

Coeffs f_map(const Coeffs& x, const MonotoneCap& K) {
  Coeffs g = g_map(x, K);
  double ng = norm(g, K.space);
  // ||g(x)|| >= max(||x||, 1 - ||x||) >= 1/2 on the cap, so this cannot divide by ~0
  return scale(g, 1.0 / ng);
}

Coeffs retract_monotone(const Coeffs& x, const SpaceSpec& s, double tol) {
  if (norm(x, s) > 1.0 + tol)
    throw std::domain_error("retract_monotone expects a point of the unit ball");
  Coeffs out;
  out.bound = x.bound;
  double m = std::numeric_limits<double>::infinity();
  int expected = 1;
  for (const auto& e : x.entries) {
    if (e.index != expected) break;  // implicit zero kills the running minimum
    m = std::min(m, std::abs(e.value));
    if (m == 0.0) break;
    out.entries.push_back({expected, m});
    ++expected;
  }
  return out;
}

namespace {

// projection onto { v_1 >= v_2 >= ... >= v_n } (least squares, PAV),
// then onto the nonnegative orthant; the composition is the exact projection
// onto the monotone nonnegative cone.
void project_monotone_cone(std::vector<double>& v) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> stack;
  stack.reserve(v.size());
  for (double u : v) {
    Block b{u, 1};
    while (!stack.empty() &&
           stack.back().sum * b.count < b.sum * stack.back().count) {
      b.sum += stack.back().sum;
      b.count += stack.back().count;
      stack.pop_back();
    }
    stack.push_back(b);
  }
  std::size_t i = 0;
  for (const Block& b : stack) {
    double mean = b.sum / b.count;
    for (int k = 0; k < b.count; ++k) v[i++] = mean;
  }
  for (double& u : v) u = std::max(u, 0.0);
}

void project_ball_l2(std::vector<double>& v) {
  double n2 = 0.0;
  for (double u : v) n2 += u * u;
  double n = std::sqrt(n2);
  if (n > 1.0)
    for (double& u : v) u /= n;
}

}  // namespace

Coeffs project_cap_l2(const Coeffs& x, double tol, int max_sweeps) {
  int n = x.max_index();
  if (n == 0) return Coeffs::zero();
  std::vector<double> xv = x.dense(n);
  std::vector<double> cur = xv;
  std::vector<double> p(n, 0.0), q(n, 0.0), y(n, 0.0), y_prev(n, 0.0);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) y[i] = cur[i] + p[i];
    project_monotone_cone(y);
    for (int i = 0; i < n; ++i) p[i] = cur[i] + p[i] - y[i];

    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = y[i] + q[i];
    project_ball_l2(z);
    for (int i = 0; i < n; ++i) q[i] = y[i] + q[i] - z[i];

    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      delta = std::max(delta, std::abs(y[i] - y_prev[i]));
      delta = std::max(delta, std::abs(z[i] - cur[i]));
    }
    cur.swap(z);
    y_prev = y;
    if (sweep > 0 && delta < tol) {
      Coeffs out = Coeffs::from_dense(y);  // cone-exact side of the last sweep
      out.bound = std::max(out.bound, x.bound);
      return out;
    }
  }
  throw ConvergenceError("project_cap_l2: sweep budget exhausted");
}

OrbitRecord orbit(const Coeffs& seed, const MonotoneCap& K, int steps) {
  if (steps < 1) throw std::invalid_argument("orbit needs steps >= 1");
  if (!in_cap(seed, K)) throw std::domain_error("orbit seed is not in the cap");
  OrbitRecord rec;
  rec.seed = seed;
  rec.iterates.reserve(static_cast<std::size_t>(steps));
  std::vector<double> y = seed.dense(seed.max_index());
  for (int k = 1; k <= steps; ++k) {
    std::vector<double> g = g_dense(y, K.space);
    double ng = dense_norm(g, K.space);
    for (double& u : g) u /= ng;
    if (k > 1) rec.gaps.push_back(dense_dist(g, y, K.space));
    Coeffs it = Coeffs::from_dense(g);
    it.bound = std::max(seed.bound + k, it.max_index());
    rec.iterates.push_back(std::move(it));
    y.swap(g);
  }
  return rec;
}

void orbit_scan(const Coeffs& seed, const MonotoneCap& K, int steps,
                const std::function<void(int, double, double)>& on_step) {
  if (!in_cap(seed, K)) throw std::domain_error("orbit seed is not in the cap");
  std::vector<double> y = seed.dense(seed.max_index());
  // y_k = F^k(seed); report gap_k = ||y_{k+1} - y_k|| and tail_k = ||g(y_k) - y_k||
  std::vector<double> g = g_dense(y, K.space);
  double ng = dense_norm(g, K.space);
  std::vector<double> f(g);
  for (double& u : f) u /= ng;
  y.swap(f);
  for (int k = 1; k < steps; ++k) {
    g = g_dense(y, K.space);
    double tail = dense_dist(g, y, K.space);
    ng = dense_norm(g, K.space);
    f = g;
    for (double& u : f) u /= ng;
    on_step(k, dense_dist(f, y, K.space), tail);
    y.swap(f);
  }
}

}  // namespace fpf
