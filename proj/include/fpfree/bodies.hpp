#pragma once
#include "fpfree/pou.hpp"

namespace fpf::pou {

//! Exact nearest-point machinery for conv(vertices).  Faces are precomputed
//! once: for every affinely independent vertex subset we store an orthonormal
//! direction frame, so a query is a handful of dot products per face.  Subsets
//! with (numerically) dependent directions are skipped — their hull is covered
//! by a retained sub-subset up to the drop tolerance.
class PolytopeDistance {
 public:
  explicit PolytopeDistance(std::vector<Vec> verts, double drop_tol = 1e-9);
  double distance(const Vec& x) const;
  Vec project(const Vec& x) const;
  const std::vector<Vec>& verts() const { return verts_; }

 private:
  struct Face {
    int base = 0;
    std::vector<int> others;          // remaining member vertices
    std::vector<Vec> q;               // orthonormal frame spanning the face
    std::vector<std::vector<double>> rinv;  // maps frame coords -> affine coords
  };
  std::vector<Vec> verts_;
  std::vector<Face> faces_;
  int dim_ = 0;
};

//! Axis box prod [0, L_i]; a zero side length degenerates the axis (segments
//! and thin slabs reuse the same code path).
class BoxBody : public ConvexBody {
 public:
  BoxBody(std::string name, Vec sides);
  int dim() const override { return int(sides_.size()); }
  std::string name() const override { return name_; }
  double distance(const Vec& x) const override;
  double slice_distance(const Vec& x, int n) const override;
  std::vector<Vec> sample_slice(int n, double h) const override;
  std::vector<Vec> vertices() const override;
  Vec bbox_lo() const override;
  Vec bbox_hi() const override;

 private:
  std::string name_;
  Vec sides_;
};

//! conv{0, a_1 e_1, ..., a_d e_d}; slices drop trailing vertices.
class CoordSimplexBody : public ConvexBody {
 public:
  CoordSimplexBody(std::string name, Vec axes);
  int dim() const override { return int(axes_.size()); }
  std::string name() const override { return name_; }
  double distance(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-10) const override;
  double slice_distance(const Vec& x, int n) const override;
  std::vector<Vec> sample_slice(int n, double h) const override;
  std::vector<Vec> vertices() const override;
  Vec bbox_lo() const override;
  Vec bbox_hi() const override;

 private:
  std::string name_;
  Vec axes_;
  std::vector<PolytopeDistance> slice_hulls_;  // [n] = hull of slice n
};

//! Ambient image of a flat set: conv{0, mu w_0, ..., mu w_{d-1}} with the
//! basis columns truncated to R^d.  The chain here is E_n = [w_0 .. w_n]
//! (E_0 = {0}), whose heights inherit the flatness of the weight family.
//! Sampling walks the scaled profile s_1 >= ... >= s_d >= 0 directly, with a
//! per-coordinate pitch h / (2 alpha_k) — a cartesian grid would either miss
//! the thin directions or explode.
class FlatImageBody : public ConvexBody {
 public:
  FlatImageBody(std::string name, FlatWeights weights, double mu, int ambient_dim);
  int dim() const override { return ambient_; }
  std::string name() const override { return name_; }
  double distance(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-10) const override;
  double slice_distance(const Vec& x, int n) const override;
  std::vector<Vec> sample_slice(int n, double h) const override;
  std::vector<Vec> vertices() const override;
  Vec bbox_lo() const override;
  Vec bbox_hi() const override;
  const FlatWeights& weights() const { return weights_; }

 private:
  Vec w_column(int k) const;  // mu * (truncated w_k)
  std::string name_;
  FlatWeights weights_;
  double mu_ = 1.0;
  int ambient_ = 0;
  std::vector<PolytopeDistance> slice_hulls_;
};

//! Preset registry: segment2d, thinbox2d, thinbox2dexp, simplex3d, flat4d.
std::unique_ptr<ConvexBody> make_body(const std::string& preset);

}  // namespace fpf::pou
