#pragma once
#include <functional>
#include <optional>

#include "fpfree/seq.hpp"

namespace fpf {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Flatness radii r_n = base^n, strictly decreasing to 0 with r_0 = 1.
//! The Holder form fixes base = 20^(1/(alpha-1)), the schedule used by the
//! alpha-Holder retraction bound (alpha = 1/2 gives r_n = 400^-n).
struct RSchedule {
  enum class Form { Exponential, Holder };
  Form form = Form::Exponential;
  double base = 0.5;
  double alpha = 0.0;  // Holder only

  static RSchedule exponential(double base);
  static RSchedule holder(double alpha);
  double r(int n) const;
  std::string label() const;
};

//! Super-geometric weight family alpha_i = c * q^(i^2).  A geometric family
//! can never work here: sum_i alpha_{i+n}/alpha_i would be a divergent
//! constant-term series, which is why the decay has to beat every ratio test.
struct FlatCertificate {
  struct Row {
    int n;
    double lhs_tail;   // 3 sum_{i>=n} alpha_i
    double lhs_ratio;  // 2K * 1520 * 20 * sum_i alpha_{i+n}/alpha_i
    double rhs;        // min(1, r_{n+1})
  };
  std::vector<Row> rows;  // n = 1..scan_to
  int scan_to = 0;
  // closed-form tail domination for n > scan_to: both left-hand sides decay by
  // a factor <= q^(2n+1) per step while the right-hand side decays by exactly
  // base, so one boundary check plus the ratio comparison covers the tail.
  double tail_lhs_tail = 0.0;
  double tail_lhs_ratio = 0.0;
  double tail_rhs = 0.0;
  double tail_step_ratio = 0.0;  // q^(2 scan_to + 3)
  bool ok = false;
};

struct FlatWeights {
  double c = 1.0;
  double q = 0.5;
  double basis_constant = 1.0;  // K of the coordinate basis (l2: 1)
  RSchedule schedule = RSchedule::exponential(0.5);
  FlatCertificate certificate;

  double alpha(int i) const;     // c * q^(i*i)
  double tail_sum(int n) const;  // sum_{i>=n} alpha_i
  //! sum_{i>=1} alpha_{i+n}/alpha_i = q^(n^2+2n) / (1 - q^(2n)), exact closed form.
  double ratio_sum(int n) const;
};

//! Strengthened admissibility condition enforced by the solver, for all n >= 1:
//!   max( 3 sum_{i>=n} alpha_i,  2K*1520*20 * sum_i alpha_{i+n}/alpha_i ) <= min(1, r_{n+1}).
//! The 1520*20 multiplier absorbs the Holder constant of the net retraction, so
//! the same weights support both the bare iterate chain and the retracted one.
bool check_weights(double c, double q, const RSchedule& r, double basis_constant,
                   FlatCertificate* cert);

//! Dyadic grid scan, largest q then largest c that passes; deterministic.
FlatWeights solve_alphas(const RSchedule& r, double basis_constant = 1.0);

//! Direct partial summation of sum_i alpha(i+n)/alpha(i); `converged` is false
//! when the terms never drop below the cutoff (e.g. geometric weights).
struct RatioSeries {
  bool converged = false;
  double value = 0.0;
  int terms = 0;
};
RatioSeries ratio_series_direct(const std::function<double(int)>& alpha, int n,
                                int max_terms = 200000, double cutoff = 1e-300);

//! Simplex coordinates over the flat basis w_0, w_1, w_2, ...:
//! the point is t_0 w_0 + sum_{k>=1} t_k w_k with t >= 0, sum t <= budget.
struct WPoint {
  std::vector<double> t;  // t[k] multiplies w_k; t[0] belongs to w_0
  double budget = 1.0;

  double total() const;
  int top_index() const;  // largest k with t_k != 0
};

//! K = { t_0 w_0 + sum t_n w_n : t >= 0, sum t <= mu } with w_n = sum_{i<=n} alpha_i x_i
//! and w_0 the full series.  All metric computations run in the alpha-scaled
//! coordinates s_k = x_k-coefficient / alpha_k, where w_m is the exact 0/1
//! profile; the raw alpha_k underflow doubles long before the materialized
//! range ends, the s-representation does not.
struct FlatSet {
  FlatWeights weights;
  double mu = 1.0;
  SpaceSpec space = SpaceSpec::l2();
  int w_bound = 48;  // largest w-index a point may carry

  int x_bound() const { return w_bound + 2; }

  bool validate(const WPoint& p, double tol = 1e-9) const;
  //! s_k = t_0 + sum_{i>=k} t_i for k = 1..x_bound (nonincreasing, in [0, mu]).
  std::vector<double> s_coords(const WPoint& p) const;
  std::vector<double> s_of_w(int m) const;  // s-profile of w_m (0 -> full series)
  Coeffs w_to_x(const WPoint& p) const;     // literal materialized coefficients

  double w_star(const Coeffs& x, int n) const;  // coord_n/alpha_n - coord_{n+1}/alpha_{n+1}
  double w_star_s(const std::vector<double>& s, int n) const;  // s_n - s_{n+1}

  //! Recover the simplex coordinates of a literal coefficient vector; empty if
  //! the point is not in K (or beyond the representable alpha range).
  std::optional<WPoint> x_to_w(const Coeffs& x, double tol = 1e-9) const;

  //! Collapse levels beyond n onto w_{n+1}; budget and membership preserved.
  WPoint truncate_to_level(const WPoint& p, int n) const;
  //! Distance from p to its full slice collapse (t_0 and every level > n+1
  //! folded onto w_{n+1}).  The two s-profiles agree exactly below level n+2,
  //! so the gap is the norm of the coordinate tail — no cancellation, which
  //! matters because the true heights sit far below one ulp of the budget.
  double slice_gap(const WPoint& p, int n) const;
  double height_bound(int n) const;    // 3 mu sum_{k>=n+2} alpha_k
  double x_tail_bound() const;         // mu sum_{k>x_bound} alpha_k, truncation slack

  //! F(t_0 w_0 + sum t_i w_i) = (mu - sum_{i>=1} t_i) w_1 + sum t_i w_{i+1}.
  WPoint shift(const WPoint& p) const;

  double s_norm(const std::vector<double>& s) const;
  double s_dist(const std::vector<double>& a, const std::vector<double>& b) const;
  double dist(const WPoint& a, const WPoint& b) const;
};

//! Termwise audit of the iterate estimate
//!   ||F^m a - F^m b|| <= 2K (sum_k alpha_{k+m}/alpha_k) ||a-b|| + r_m
//!                     <= r_m (||a-b|| + 1).
struct IterateGapRow {
  int m;
  double gap, mid, rhs;
  bool ok_first, ok_second;
};
std::vector<IterateGapRow> iterate_gap_check(const FlatSet& K, const WPoint& a,
                                             const WPoint& b, int n,
                                             double tol = 1e-12);

}  // namespace fpf
