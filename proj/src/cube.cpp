#include "fpfree/cube.hpp"

#include <algorithm>
#include <cmath>

namespace fpf {

AlphaSchedule AlphaSchedule::one_minus_geometric(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("one_minus_geometric needs q in (0,1)");
  AlphaSchedule s;
  s.kind = Kind::OneMinusGeometric;
  s.q = q;
  return s;
}

AlphaSchedule AlphaSchedule::explicit_list(std::vector<double> values) {
  for (double a : values)
    if (!(a >= 0.0 && a < 1.0))
      throw std::invalid_argument("explicit alpha values must lie in [0,1)");
  AlphaSchedule s;
  s.kind = Kind::ExplicitList;
  s.values = std::move(values);
  return s;
}

double AlphaSchedule::alpha(int n) const {
  if (n < 1) throw std::invalid_argument("alpha index must be >= 1");
  if (kind == Kind::OneMinusGeometric) return 1.0 - std::pow(q, n);
  if (n > static_cast<int>(values.size()))
    throw std::out_of_range("alpha index past the explicit list");
  return values[static_cast<std::size_t>(n) - 1];
}

int AlphaSchedule::known_length() const {
  return kind == Kind::ExplicitList ? static_cast<int>(values.size()) : 0;
}

bool in_cube(const Coeffs& x, double tol) {
  for (const auto& e : x.entries)
    if (e.value < -tol || e.value > 1.0 + tol) return false;
  return true;
}

Coeffs q_retract(const Coeffs& x) {
  Coeffs out;
  out.bound = x.bound;
  for (const auto& e : x.entries) {
    double v = std::min(1.0, std::abs(e.value));
    if (v != 0.0) out.entries.push_back({e.index, v});
  }
  return out;
}

Coeffs AffineDiagonal::apply(const Coeffs& x) const {
  if (!in_cube(x)) throw std::domain_error("affine map expects a cube point");
  if (x.max_index() > bound)
    throw std::domain_error("affine map input exceeds the materialized bound");
  std::vector<double> t = x.dense(bound);
  for (int n = 1; n <= bound; ++n) {
    double a = schedule.alpha(n);
    t[static_cast<std::size_t>(n) - 1] =
        t[static_cast<std::size_t>(n) - 1] * a + (1.0 - a);
  }
  Coeffs out = Coeffs::from_dense(t);
  out.bound = bound;
  return out;
}

Coeffs AffineDiagonal::power(const Coeffs& x, int m) const {
  if (m < 0) throw std::invalid_argument("power needs m >= 0");
  if (!in_cube(x)) throw std::domain_error("affine map expects a cube point");
  if (x.max_index() > bound)
    throw std::domain_error("affine map input exceeds the materialized bound");
  if (m == 0) return x;
  std::vector<double> t = x.dense(bound);
  for (int n = 1; n <= bound; ++n) {
    double a = schedule.alpha(n);
    // Horner order: t a^m + (1-a)(1 + a + ... + a^{m-1}) folded one factor at a
    // time, the exact rounding sequence of m-fold application.  A literal a^m
    // evaluation drifts a few ulp away from the iterates and would break the
    // agrees-exactly contract.
    double v = t[static_cast<std::size_t>(n) - 1];
    for (int k = 0; k < m; ++k) v = v * a + (1.0 - a);
    t[static_cast<std::size_t>(n) - 1] = v;
  }
  Coeffs out = Coeffs::from_dense(t);
  out.bound = bound;
  return out;
}

double AffineDiagonal::tail_bound() const {
  if (schedule.kind == AlphaSchedule::Kind::OneMinusGeometric)
    return std::pow(schedule.q, bound + 1);
  return 0.0;  // explicit lists are fully materialized
}

double uniform_ar_bound(const AlphaSchedule& sched, int m) {
  if (m < 1) throw std::invalid_argument("uniform_ar_bound needs m >= 1");
  auto f = [&](double a) {
    double am = a;
    for (int k = 1; k < m; ++k) am *= a;
    return am * (1.0 - a);
  };
  double astar = static_cast<double>(m) / (m + 1);
  double best = 0.0;
  if (sched.kind == AlphaSchedule::Kind::ExplicitList) {
    for (double a : sched.values) best = std::max(best, f(a));
    return 2.0 * best;
  }
  // alpha_n increases to 1 and a -> a^m(1-a) is unimodal with peak at m/(m+1),
  // so the first alpha_n past the peak dominates everything after it.
  for (int n = 1;; ++n) {
    double a = sched.alpha(n);
    best = std::max(best, f(a));
    if (a > astar) break;
  }
  return 2.0 * best;
}

Coeffs simplex_shift(const Coeffs& x, double tol) {
  double total = 0.0;
  for (const auto& e : x.entries) {
    if (e.value < -tol) throw std::domain_error("simplex point has a negative mass");
    total += e.value;
  }
  if (std::abs(total - 1.0) > tol)
    throw std::domain_error("simplex point mass must sum to 1");
  return shift_right(x);
}

Coeffs positive_part(const Coeffs& x) {
  Coeffs out;
  out.bound = x.bound;
  for (const auto& e : x.entries)
    if (e.value > 0.0) out.entries.push_back({e.index, e.value});
  return out;
}

}  // namespace fpf
