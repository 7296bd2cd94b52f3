#pragma once
#include "fpfree/seq.hpp"

namespace fpf {

//! Diagonal coefficient schedule alpha_n in [0,1), sup alpha_n = 1.
//! OneMinusGeometric(q): alpha_n = 1 - q^n (exact dyadics for q = 1/2).
struct AlphaSchedule {
  enum class Kind { ExplicitList, OneMinusGeometric };
  Kind kind = Kind::OneMinusGeometric;
  double q = 0.5;
  std::vector<double> values;  // ExplicitList only

  static AlphaSchedule one_minus_geometric(double q);
  static AlphaSchedule explicit_list(std::vector<double> values);

  double alpha(int n) const;
  double beta(int n) const { return 1.0 - alpha(n); }
  int known_length() const;  // 0 means "all n"
};

//! Membership in the Hilbert-cube cap: every coefficient in [0,1].
bool in_cube(const Coeffs& x, double tol = 1e-9);

//! Coordinatewise retraction of the whole space onto the cube:
//! t_n -> min(1, |t_n|).  1-Lipschitz in the sup norm, idempotent.
Coeffs q_retract(const Coeffs& x);

//! Fixed-point-free affine self-map of the cube,
//!   F(x)_n = alpha_n t_n + (1 - alpha_n),
//! materialized on coordinates 1..bound.  The ignored offset tail contributes
//! at most tail_bound() to any sup-norm quantity.
struct AffineDiagonal {
  AlphaSchedule schedule;
  int bound = 48;

  Coeffs apply(const Coeffs& x) const;
  //! Closed form of the m-th iterate, t_n alpha_n^m + (1 - alpha_n^m),
  //! evaluated in Horner order so it matches m-fold apply() bit for bit.
  Coeffs power(const Coeffs& x, int m) const;
  double tail_bound() const;  // sup_{n > bound} beta_n
};

//! 2 sup_n alpha_n^m (1 - alpha_n): uniform bound for ||F^{m+1}x - F^m x||_sup.
//! The scan stops once alpha_n passes the unimodal maximizer m/(m+1).
double uniform_ar_bound(const AlphaSchedule& sched, int m);

//! Right shift on the l1 simplex (the classical minimal-displacement-1 example).
Coeffs simplex_shift(const Coeffs& x, double tol = 1e-9);

//! Coordinatewise positive part.
Coeffs positive_part(const Coeffs& x);

}  // namespace fpf
