#include "fpfree/flat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpf {

RSchedule RSchedule::exponential(double base) {
  if (!(base > 0.0 && base < 1.0))
    throw std::invalid_argument("RSchedule: base must lie in (0,1)");
  RSchedule s;
  s.form = Form::Exponential;
  s.base = base;
  return s;
}

RSchedule RSchedule::holder(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("RSchedule: alpha must lie in (0,1)");
  RSchedule s;
  s.form = Form::Holder;
  s.alpha = alpha;
  s.base = std::pow(20.0, 1.0 / (alpha - 1.0));
  return s;
}

double RSchedule::r(int n) const {
  if (n < 0) throw std::invalid_argument("RSchedule: negative level");
  return std::pow(base, n);
}

std::string RSchedule::label() const {
  if (form == Form::Holder) return "holder(" + std::to_string(alpha) + ")";
  return "exponential(" + std::to_string(base) + ")";
}

double FlatWeights::alpha(int i) const {
  if (i < 1) throw std::invalid_argument("alpha index starts at 1");
  return c * std::pow(q, double(i) * double(i));
}

double FlatWeights::tail_sum(int n) const {
  double acc = 0.0;
  for (int i = n; i < n + 4000; ++i) {
    const double a = alpha(i);
    acc += a;
    if (a < acc * 1e-20 || a == 0.0) break;
  }
  return acc;
}

double FlatWeights::ratio_sum(int n) const {
  if (n < 1) throw std::invalid_argument("ratio_sum needs n >= 1");
  // sum_i q^((i+n)^2 - i^2) = q^(n^2) sum_i (q^(2n))^i, a geometric series.
  const double num = std::pow(q, double(n) * n + 2.0 * n);
  const double den = 1.0 - std::pow(q, 2.0 * n);
  return num / den;
}

namespace {

constexpr int kScanTo = 64;

double strengthen_multiplier(double basis_constant) {
  return 2.0 * basis_constant * 1520.0 * 20.0;
}

}  // namespace

bool check_weights(double c, double q, const RSchedule& r, double basis_constant,
                   FlatCertificate* cert) {
  if (!(c > 0.0) || !(q > 0.0 && q < 1.0)) return false;
  FlatWeights w;
  w.c = c;
  w.q = q;
  w.basis_constant = basis_constant;
  w.schedule = r;
  const double M = strengthen_multiplier(basis_constant);

  FlatCertificate out;
  out.scan_to = kScanTo;
  bool ok = true;
  for (int n = 1; n <= kScanTo; ++n) {
    FlatCertificate::Row row;
    row.n = n;
    row.lhs_tail = 3.0 * w.tail_sum(n);
    row.lhs_ratio = M * w.ratio_sum(n);
    row.rhs = std::min(1.0, r.r(n + 1));
    if (!(row.lhs_tail <= row.rhs) || !(row.lhs_ratio <= row.rhs)) ok = false;
    out.rows.push_back(row);
    if (!ok) break;
  }

  if (ok) {
    // Tail induction past the scan.  Both left-hand sides shrink by at least
    // q^(2n+1) per unit step of n while the right-hand side shrinks by exactly
    // the schedule base, so a single boundary inequality closes the argument.
    const int n1 = kScanTo + 1;
    out.tail_lhs_tail = 3.0 * c * std::pow(q, double(n1) * n1) / (1.0 - q);
    out.tail_lhs_ratio = M * w.ratio_sum(n1);
    out.tail_rhs = std::min(1.0, r.r(n1 + 1));
    out.tail_step_ratio = std::pow(q, 2.0 * n1 + 1.0);
    if (!(out.tail_lhs_tail <= out.tail_rhs) ||
        !(out.tail_lhs_ratio <= out.tail_rhs) ||
        !(out.tail_step_ratio <= r.base))
      ok = false;
  }
  out.ok = ok;
  if (cert) *cert = out;
  return ok;
}

FlatWeights solve_alphas(const RSchedule& r, double basis_constant) {
  // Dyadic grids, scanned from the mildest decay downward; the first passing
  // pair wins, which keeps the result reproducible across runs and platforms.
  for (int kq = 1; kq <= 24; ++kq) {
    const double q = std::ldexp(1.0, -kq);
    for (int kc = 0; kc <= 60; ++kc) {
      const double c = std::ldexp(1.0, -kc);
      FlatCertificate cert;
      if (check_weights(c, q, r, basis_constant, &cert)) {
        FlatWeights w;
        w.c = c;
        w.q = q;
        w.basis_constant = basis_constant;
        w.schedule = r;
        w.certificate = cert;
        return w;
      }
    }
  }
  throw SolverError("solve_alphas: no admissible weights on the dyadic grid for " +
                    r.label());
}

RatioSeries ratio_series_direct(const std::function<double(int)>& alpha, int n,
                                int max_terms, double cutoff) {
  RatioSeries out;
  double acc = 0.0;
  for (int i = 1; i <= max_terms; ++i) {
    const double den = alpha(i);
    if (den == 0.0) {  // ran off the representable range; treat as exhausted
      out.converged = true;
      break;
    }
    const double term = alpha(i + n) / den;
    acc += term;
    out.terms = i;
    if (term < cutoff) {
      out.converged = true;
      break;
    }
  }
  out.value = acc;
  return out;
}

double WPoint::total() const {
  double acc = 0.0;
  for (double v : t) acc += v;
  return acc;
}

int WPoint::top_index() const {
  for (int k = int(t.size()) - 1; k >= 0; --k)
    if (t[size_t(k)] != 0.0) return k;
  return 0;
}

bool FlatSet::validate(const WPoint& p, double tol) const {
  if (p.t.empty()) return false;
  if (std::abs(p.budget - mu) > tol * std::max(1.0, mu)) return false;
  for (double v : p.t)
    if (!(v >= -tol) || !std::isfinite(v)) return false;
  if (p.top_index() > w_bound) return false;
  return p.total() <= p.budget + tol * std::max(1.0, p.budget);
}

std::vector<double> FlatSet::s_coords(const WPoint& p) const {
  const int N = int(p.t.size()) - 1;
  std::vector<double> suffix(size_t(std::max(N, 0)) + 2, 0.0);
  for (int k = N; k >= 1; --k) suffix[size_t(k)] = p.t[size_t(k)] + suffix[size_t(k) + 1];
  const double t0 = p.t[0];
  std::vector<double> s(size_t(x_bound()), 0.0);
  for (int k = 1; k <= x_bound(); ++k)
    s[size_t(k - 1)] = t0 + (k <= N ? suffix[size_t(k)] : 0.0);
  return s;
}

std::vector<double> FlatSet::s_of_w(int m) const {
  if (m < 0 || m > w_bound) throw std::invalid_argument("w index out of range");
  std::vector<double> s(size_t(x_bound()), 0.0);
  for (int k = 1; k <= x_bound(); ++k)
    if (m == 0 || k <= m) s[size_t(k - 1)] = 1.0;
  return s;
}

Coeffs FlatSet::w_to_x(const WPoint& p) const {
  if (!validate(p)) throw std::domain_error("w_to_x: point outside the flat set");
  const auto s = s_coords(p);
  std::vector<double> v(s.size());
  for (size_t k = 0; k < s.size(); ++k) v[k] = s[k] * weights.alpha(int(k) + 1);
  return Coeffs::from_dense(v);
}

double FlatSet::w_star(const Coeffs& x, int n) const {
  if (n < 1) throw std::invalid_argument("w_star index starts at 1");
  const double an = weights.alpha(n);
  const double an1 = weights.alpha(n + 1);
  if (an1 < std::numeric_limits<double>::min())
    throw std::domain_error("w_star: weight underflow, use the scaled-coordinate form");
  return coord(x, n) / an - coord(x, n + 1) / an1;
}

double FlatSet::w_star_s(const std::vector<double>& s, int n) const {
  if (n < 1 || size_t(n) >= s.size())
    throw std::invalid_argument("w_star_s index out of range");
  return s[size_t(n - 1)] - s[size_t(n)];
}

std::optional<WPoint> FlatSet::x_to_w(const Coeffs& x, double tol) const {
  const int L = x.max_index();
  if (L > x_bound()) return std::nullopt;
  int kmax = std::max(1, std::min(L + 1, x_bound()));
  // past the normal range of alpha the scaled coordinates cannot be divided
  // back out; fold everything deeper into the w_0 mass and let the round-trip
  // audit below vouch for the residue
  while (kmax > 1 && weights.alpha(kmax) < std::numeric_limits<double>::min())
    --kmax;
  if (weights.alpha(1) < std::numeric_limits<double>::min()) return std::nullopt;
  std::vector<double> s(size_t(kmax), 0.0);
  for (int k = 1; k <= kmax; ++k)
    s[size_t(k - 1)] = coord(x, k) / weights.alpha(k);
  WPoint p;
  p.budget = mu;
  p.t.assign(size_t(kmax), 0.0);
  p.t[0] = std::max(0.0, s[size_t(kmax - 1)]);
  for (int k = 1; k < kmax; ++k) {
    const double d = s[size_t(k - 1)] - s[size_t(k)];
    if (d < -tol) return std::nullopt;
    p.t[size_t(k)] = std::max(0.0, d);
  }
  if (!validate(p, tol)) return std::nullopt;
  // round-trip audit: a foreign vector that merely survived the clamps above
  // will not rematerialize to itself; scaled by mu so tiny sets stay guarded
  const Coeffs back = w_to_x(p);
  if (fpf::dist(back, x, space) > tol * (mu + norm(x, space))) return std::nullopt;
  return p;
}

WPoint FlatSet::truncate_to_level(const WPoint& p, int n) const {
  if (n < 0) throw std::invalid_argument("truncate_to_level: negative level");
  WPoint out;
  out.budget = p.budget;
  const int keep = n + 2;  // indices 0..n+1 survive
  if (int(p.t.size()) <= keep) {
    out.t = p.t;
    return out;
  }
  out.t.assign(p.t.begin(), p.t.begin() + keep);
  double lump = out.t[size_t(keep - 1)];
  for (size_t k = size_t(keep); k < p.t.size(); ++k) lump += p.t[k];
  out.t[size_t(keep - 1)] = lump;
  return out;
}

double FlatSet::slice_gap(const WPoint& p, int n) const {
  if (n < 0) throw std::invalid_argument("slice_gap: negative level");
  // The collapse keeps s_1..s_{n+1} bit-for-bit and zeroes the rest, so the
  // distance is the norm of the surviving tail.  Forming the collapse point
  // and subtracting would re-round the shared prefix and drown the answer.
  auto s = s_coords(p);
  for (size_t k = 0; k < s.size() && int(k) <= n; ++k) s[k] = 0.0;
  return s_norm(s);
}

double FlatSet::height_bound(int n) const { return 3.0 * mu * weights.tail_sum(n + 2); }

double FlatSet::x_tail_bound() const { return mu * weights.tail_sum(x_bound() + 1); }

WPoint FlatSet::shift(const WPoint& p) const {
  if (!validate(p)) throw std::domain_error("shift: point outside the flat set");
  if (p.top_index() + 1 > w_bound)
    throw std::domain_error("shift: materialized basis exhausted, raise w_bound");
  double rest = 0.0;
  for (size_t k = 1; k < p.t.size(); ++k) rest += p.t[k];
  WPoint out;
  out.budget = p.budget;
  out.t.assign(p.t.size() + 1, 0.0);
  out.t[1] = std::max(0.0, p.budget - rest);
  for (size_t k = 1; k < p.t.size(); ++k) out.t[k + 1] = p.t[k];
  return out;
}

double FlatSet::s_norm(const std::vector<double>& s) const {
  std::vector<double> v(s.size());
  for (size_t k = 0; k < s.size(); ++k) v[k] = s[k] * weights.alpha(int(k) + 1);
  return norm(Coeffs::from_dense(v), space);
}

double FlatSet::s_dist(const std::vector<double>& a, const std::vector<double>& b) const {
  const size_t n = std::max(a.size(), b.size());
  std::vector<double> v(n);
  for (size_t k = 0; k < n; ++k) {
    const double av = k < a.size() ? a[k] : 0.0;
    const double bv = k < b.size() ? b[k] : 0.0;
    v[k] = (av - bv) * weights.alpha(int(k) + 1);
  }
  return norm(Coeffs::from_dense(v), space);
}

double FlatSet::dist(const WPoint& a, const WPoint& b) const {
  return s_dist(s_coords(a), s_coords(b));
}

std::vector<IterateGapRow> iterate_gap_check(const FlatSet& K, const WPoint& a,
                                             const WPoint& b, int n, double tol) {
  std::vector<IterateGapRow> rows;
  const double base_dist = K.dist(a, b);
  const double twoK = 2.0 * K.weights.basis_constant;
  WPoint pa = a, pb = b;
  for (int m = 1; m <= n; ++m) {
    pa = K.shift(pa);
    pb = K.shift(pb);
    IterateGapRow row;
    row.m = m;
    row.gap = K.dist(pa, pb);
    const double rm = K.weights.schedule.r(m);
    row.mid = twoK * K.weights.ratio_sum(m) * base_dist + rm;
    row.rhs = rm * (base_dist + 1.0);
    row.ok_first = row.gap <= row.mid + tol * (1.0 + row.mid);
    row.ok_second = row.mid <= row.rhs + tol * (1.0 + row.rhs);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fpf
