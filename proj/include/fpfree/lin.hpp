#pragma once
#include <functional>

#include "fpfree/seq.hpp"

namespace fpf {

//! Raised when an iterative solver exhausts its sweep budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! K = { sum t_n x_n : t_1 >= t_2 >= ... >= 0, ||x|| <= 1 } over an lp space.
//! The fixed-point-free analysis needs Phi unbounded, so sup-norm spaces are
//! rejected at construction.
struct MonotoneCap {
  SpaceSpec space;
  double tol = 1e-9;
};

MonotoneCap monotone_cap(const SpaceSpec& s, double tol = 1e-9);

bool in_cap(const Coeffs& x, const MonotoneCap& K);

//! g(x) = max(t_1, 1 - ||x||) x_1 + sum t_n x_{n+1}.  Requires x in K.
Coeffs g_map(const Coeffs& x, const MonotoneCap& K);

//! F(x) = g(x)/||g(x)||, the unit-sphere self-map of K.
Coeffs f_map(const Coeffs& x, const MonotoneCap& K);

//! Running-minimum retraction of the unit ball onto K:
//! R(x) = sum_n min(|t_1|,...,|t_n|) x_n.  2-Lipschitz, identity on K.
Coeffs retract_monotone(const Coeffs& x, const SpaceSpec& s, double tol = 1e-9);

//! Metric projection onto K in l2, via Dykstra's alternating scheme between
//! the monotone nonnegative cone (pool-adjacent-violators, then clamp) and the
//! unit ball.  Throws ConvergenceError past `max_sweeps`.
Coeffs project_cap_l2(const Coeffs& x, double tol = 1e-10, int max_sweeps = 100000);

struct OrbitRecord {
  Coeffs seed;
  std::vector<Coeffs> iterates;  // F(x), F^2(x), ..., F^n(x)
  std::vector<double> gaps;      // ||F^{k+1}x - F^k x||
};

OrbitRecord orbit(const Coeffs& seed, const MonotoneCap& K, int steps);

//! Streaming orbit walk: on_step(k, gap_k, tail_k) where gap_k = ||F^{k+1}x - F^k x||
//! and tail_k = ||g(F^k x) - F^k x||; no iterate storage.
void orbit_scan(const Coeffs& seed, const MonotoneCap& K, int steps,
                const std::function<void(int, double, double)>& on_step);

}  // namespace fpf
