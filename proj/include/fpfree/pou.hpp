#pragma once
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fpfree/flat.hpp"

namespace fpf::pou {

//! Ambient geometry for the finite-dimensional retraction machinery is l2.
using Vec = std::vector<double>;

double vec_norm(const Vec& x);
double vec_dist(const Vec& x, const Vec& y);

//! Smallest n >= 0 with r_n <= eps.
int level_index(double eps, const RSchedule& sched);

//! Finite-dimensional convex body with an exact distance function and a chain
//! of slices K ∩ E_n, E_0 = {0}.  Presets contain the origin and sit inside
//! the unit ball, so the chain starts at height <= r_0 = 1.  All presets are
//! polytopes, which keeps heights exact (sup of a convex function over a
//! polytope is attained at a vertex).
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual double distance(const Vec& x) const = 0;
  virtual bool contains(const Vec& x, double tol = 1e-10) const;
  virtual double slice_distance(const Vec& x, int n) const = 0;
  //! Deterministic h-dense sample of K ∩ E_n; n = 0 gives {0}.
  virtual std::vector<Vec> sample_slice(int n, double h) const = 0;
  virtual std::vector<Vec> vertices() const = 0;
  virtual Vec bbox_lo() const = 0;
  virtual Vec bbox_hi() const = 0;
  double max_norm() const;
};

//! Exact slice heights h_n = sup_K d(x, K ∩ E_n), n = 0..up_to.
std::vector<double> body_heights(const ConvexBody& K, int up_to);

struct NetLevel {
  int m = 0;  // eps = 2^-m
  double eps = 0.0;
  int slice_n = 0;  // chain level the net lives on, already capped at dim
  double pitch = 0.0;  // sampler density used to build the net
  std::vector<Vec> points;
};

struct HierarchyParams {
  int m_min = -3;
  int m_max = 8;
  double sample_factor = 8.0;  // slice sampler pitch = eps / sample_factor
  int grid_per_axis = 8;       // classification grid: offsets in [-G..G]^dim
};

//! Dyadic family of greedy nets, one per level m in [m_min, m_max], each
//! eps-separated and (eps + pitch)-dense on its slice.
class NetHierarchy {
 public:
  NetHierarchy(const ConvexBody& body, const RSchedule& sched, HierarchyParams params);

  bool has_level(int m) const;
  const NetLevel& level(int m) const;
  const std::map<int, NetLevel>& levels() const { return levels_; }
  const HierarchyParams& params() const { return params_; }
  const RSchedule& schedule() const { return sched_; }
  const ConvexBody& body() const { return body_; }

  struct CellWeight {
    int m = 0;
    int idx = 0;
    double sigma = 0.0;  // raw surrogate weight
    double phi = 0.0;    // normalized; rows returned sum to 1 by construction
    Vec center;
  };
  //! Surrogate cell classification: one local grid pass around x feeds every
  //! candidate cell, so a positive weight certifies a genuine shell point of
  //! that cell within eps_{m+1} of x.  The zero offset guarantees at least one
  //! row whenever d(x, K) lies inside the covered dyadic window.
  std::vector<CellWeight> cell_weights(const Vec& x) const;

  Vec retract(const Vec& x) const;  // identity on K, weighted net average outside

  //! d(x,K) range served by the materialized levels (conservative interior).
  double coverage_lo() const;
  double coverage_hi() const;

 private:
  const ConvexBody& body_;
  RSchedule sched_;
  HierarchyParams params_;
  std::map<int, NetLevel> levels_;
};

//! Greedy farthest-point thinning: eps-separated, and (eps + h)-dense in any
//! h-dense input sample.  Deterministic (starts at the first sample).
std::vector<Vec> greedy_net(const std::vector<Vec>& samples, double eps);

struct ModulusPoint {
  double t = 0.0;
  double omega = 0.0;
};
//! Pooled modulus estimate for the retraction: pool pairs are bucketed onto
//! t_grid (then prefix-maxed, since omega is nondecreasing), and the most
//! extreme pairs are refined by random-restart hill climbing inside the
//! hierarchy's covered distance window.
std::vector<ModulusPoint> modulus_estimate(const NetHierarchy& H,
                                           const std::vector<Vec>& pool,
                                           const std::vector<double>& t_grid,
                                           int climbs, int climb_steps,
                                           uint64_t seed);

//! Deterministic rejection sample with d(x, K) in [d_lo, d_hi].
std::vector<Vec> sample_exterior(const ConvexBody& K, int count, double d_lo,
                                 double d_hi, uint64_t seed);

}  // namespace fpf::pou
