#pragma once
#include <functional>
#include <optional>
#include <utility>

#include "fpfree/cube.hpp"
#include "fpfree/flat.hpp"
#include "fpfree/lin.hpp"

namespace fpf {

//! Monotone piecewise-linear modulus table over an increasing t-grid.
struct ModulusTable {
  std::vector<double> t;
  std::vector<double> w;
  double eval(double x) const;  // linear through the origin below the grid
};

struct Modulus {
  enum class Kind { Lipschitz, Holder, Table };
  Kind kind = Kind::Lipschitz;
  double lip = 1.0;
  double alpha = 1.0;
  double lambda = 1.0;
  ModulusTable table;

  static Modulus lipschitz(double L);
  static Modulus holder(double alpha, double lambda);
  static Modulus from_table(ModulusTable tab);
  double bound(double t) const;
  std::string label() const;
};

//! A concrete self-map: evaluation closure over immutable data, plus the
//! modulus the construction promises.  `uniform` means the declared bound is
//! claimed per-iterate, not just for a single application.
struct MapHandle {
  std::string name;
  std::string domain;  // "cap", "cube", "ball", "ball(r)", "flat"
  SpaceSpec space = SpaceSpec::l2();
  Modulus declared;
  bool uniform = false;
  bool fixed_point_free = true;
  std::optional<Coeffs> witness_seed;  // orbit with displacement -> 0
  //! When set, iterates satisfy ||T^n x - T^n y|| <= r_n (||x-y||^alpha + 1).
  std::optional<std::pair<RSchedule, double>> iterate_envelope;
  std::function<Coeffs(const Coeffs&)> eval;

  Coeffs operator()(const Coeffs& x) const { return eval(x); }
};

//! x inside B(r) stays put, anything else lands on the sphere of radius r;
//! 2-Lipschitz in any of the supported norms.
Coeffs radial_retract(const Coeffs& x, double r, const SpaceSpec& s);

//! S_r(x) = r S(x/r) on B(r).  Fixed points and displacement scale with r;
//! a dyadic r keeps the conjugation S_r^n(x) = r S^n(x/r) exact in floats.
//! With holder_alpha > 0 the result is declared Holder(alpha, 2 L r^(1-alpha)),
//! using diam B(r) = 2r to trade a Lipschitz bound for a Holder one.
MapHandle scale_map(const MapHandle& S, double r, double holder_alpha = 0.0);

//! T = (1-lambda) G + lambda id: same fixed points, displacement scaled by
//! exactly (1-lambda), Lipschitz constant (1-lambda) L + lambda.
MapHandle shrink_map(const MapHandle& G, double lambda);

//! G = F o R on the retraction's domain; modulus composes as a table.
MapHandle compose_with_retraction(const MapHandle& F,
                                  std::function<Coeffs(const Coeffs&)> R,
                                  const std::string& retraction_name,
                                  const Modulus& retraction_modulus);

MapHandle make_lin_handle(const SpaceSpec& s);  // normalized cap map, no fixed points
MapHandle make_affine_handle(double q);         // diagonal affine cube map, sup norm

enum class HolderSource { ThmM4, LinBall, Hilbert };

//! Fixed-point-free alpha-Holder lambda-Lipschitz self-map of the unit ball.
//! Hilbert: cap map behind the metric projection, shrunk to Lipschitz 2, then
//! scale-conjugated behind a radial retraction with 2 L r^(1-alpha) <= lambda.
//! LinBall: same pipeline over the running-min retraction (Lipschitz 2 cost).
//! ThmM4: flat-set shift behind the dyadic net retraction of its schedule; the
//! retraction runs on the 4-dimensional truncation of the set, iterates run in
//! the exact simplex coordinates.  mu is the largest power of 1/2 with
//! (2 mu)^(1-gamma) * 1520 * 20^(2-theta) <= lambda, theta = (1+alpha)/2.
MapHandle build_holder_free_map(double alpha, double lambda, HolderSource source);

//! Deterministic parameters behind build_holder_free_map, exposed so reports
//! can recompute reference bounds without re-deriving the construction.
struct ThmM4Recipe {
  FlatWeights weights;
  double mu = 1.0;
};
ThmM4Recipe thm_m4_recipe(double alpha, double lambda);

struct BallPipelineRecipe {
  double source_lip = 8.0;  // Lipschitz constant of the raw retracted cap map
  double lambda0 = 0.0;     // averaging weight that brings it down to 2
  double r = 1.0;  // conjugation radius: largest dyadic with 4 r^(1-alpha) <= lambda
};
BallPipelineRecipe ball_pipeline_recipe(double alpha, double lambda, bool hilbert);

struct OrbitGaps {
  std::vector<double> gaps;  // ||f^{k+1} x - f^k x||, k = 0..steps-1
  double min_displacement = 0.0;
};
OrbitGaps orbit_gaps(const MapHandle& f, const Coeffs& seed, int steps);

std::vector<double> default_t_grid();  // dyadic 2^-20 .. 2^1

}  // namespace fpf
