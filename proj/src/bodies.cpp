#include "fpfree/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fpf::pou {

namespace {

// value grid 0..top inclusive with spacing <= pitch
std::vector<double> axis_grid(double top, double pitch) {
  if (top <= 0.0) return {0.0};
  const int cnt = std::max(2, int(std::ceil(top / pitch)) + 1);
  std::vector<double> v(size_t(cnt), 0.0);
  for (int j = 0; j < cnt; ++j) v[size_t(j)] = top * double(j) / double(cnt - 1);
  return v;
}

}  // namespace

PolytopeDistance::PolytopeDistance(std::vector<Vec> verts, double drop_tol)
    : verts_(std::move(verts)) {
  if (verts_.empty()) throw std::invalid_argument("PolytopeDistance: no vertices");
  dim_ = int(verts_[0].size());
  for (const auto& v : verts_)
    if (int(v.size()) != dim_)
      throw std::invalid_argument("PolytopeDistance: mixed dimensions");

  const int M = int(verts_.size());
  if (M > 12) throw std::invalid_argument("PolytopeDistance: too many vertices");
  for (unsigned mask = 1; mask < (1u << M); ++mask) {
    Face f;
    f.base = -1;
    for (int i = 0; i < M; ++i) {
      if (!(mask & (1u << i))) continue;
      if (f.base < 0)
        f.base = i;
      else
        f.others.push_back(i);
    }
    // modified Gram-Schmidt over the edge directions; a dropped direction
    // means the subset is affinely dependent and covered by sub-subsets
    double scale = 0.0;
    std::vector<Vec> dirs;
    for (int i : f.others) {
      Vec d(size_t(dim_), 0.0);
      for (int a = 0; a < dim_; ++a)
        d[size_t(a)] = verts_[size_t(i)][size_t(a)] - verts_[size_t(f.base)][size_t(a)];
      scale = std::max(scale, vec_norm(d));
      dirs.push_back(std::move(d));
    }
    const size_t r = dirs.size();
    std::vector<std::vector<double>> R(r, std::vector<double>(r, 0.0));
    bool dependent = false;
    for (size_t j = 0; j < r && !dependent; ++j) {
      Vec w = dirs[j];
      for (size_t i = 0; i < f.q.size(); ++i) {
        double dot = 0.0;
        for (int a = 0; a < dim_; ++a) dot += f.q[i][size_t(a)] * w[size_t(a)];
        R[i][j] = dot;
        for (int a = 0; a < dim_; ++a) w[size_t(a)] -= dot * f.q[i][size_t(a)];
      }
      const double nm = vec_norm(w);
      if (nm <= drop_tol * scale) {
        dependent = true;
        break;
      }
      R[j][j] = nm;
      for (auto& v : w) v /= nm;
      f.q.push_back(std::move(w));
    }
    if (dependent) continue;
    // invert the triangular factor so frame coordinates map straight to the
    // affine coefficients of the face
    f.rinv.assign(r, std::vector<double>(r, 0.0));
    for (size_t col = 0; col < r; ++col) {
      std::vector<double> e(r, 0.0);
      e[col] = 1.0;
      for (int i = int(col); i >= 0; --i) {
        double acc = e[size_t(i)];
        for (size_t k = size_t(i) + 1; k <= col; ++k) acc -= R[size_t(i)][k] * f.rinv[k][col];
        f.rinv[size_t(i)][col] = acc / R[size_t(i)][size_t(i)];
      }
    }
    faces_.push_back(std::move(f));
  }
}

double PolytopeDistance::distance(const Vec& x) const {
  double best = std::numeric_limits<double>::infinity();
  Vec u(size_t(dim_), 0.0), res(size_t(dim_), 0.0);
  std::vector<double> qc, a;
  for (const auto& f : faces_) {
    const Vec& base = verts_[size_t(f.base)];
    for (int i = 0; i < dim_; ++i) u[size_t(i)] = x[size_t(i)] - base[size_t(i)];
    const size_t r = f.q.size();
    qc.assign(r, 0.0);
    res = u;
    for (size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (int aa = 0; aa < dim_; ++aa) dot += f.q[i][size_t(aa)] * u[size_t(aa)];
      qc[i] = dot;
      for (int aa = 0; aa < dim_; ++aa) res[size_t(aa)] -= dot * f.q[i][size_t(aa)];
    }
    // affine coefficients; reject faces where the foot falls outside
    a.assign(r, 0.0);
    double asum = 0.0;
    bool valid = true;
    for (size_t i = 0; i < r; ++i) {
      double acc = 0.0;
      for (size_t k = i; k < r; ++k) acc += f.rinv[i][k] * qc[k];
      a[i] = acc;
      asum += acc;
      if (acc < -1e-10) valid = false;
    }
    if (1.0 - asum < -1e-10) valid = false;
    if (!valid) continue;
    best = std::min(best, vec_norm(res));
  }
  return best;
}

Vec PolytopeDistance::project(const Vec& x) const {
  double best = std::numeric_limits<double>::infinity();
  Vec best_p(size_t(dim_), 0.0);
  Vec u(size_t(dim_), 0.0);
  std::vector<double> qc, a;
  for (const auto& f : faces_) {
    const Vec& base = verts_[size_t(f.base)];
    for (int i = 0; i < dim_; ++i) u[size_t(i)] = x[size_t(i)] - base[size_t(i)];
    const size_t r = f.q.size();
    qc.assign(r, 0.0);
    Vec res = u;
    for (size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (int aa = 0; aa < dim_; ++aa) dot += f.q[i][size_t(aa)] * u[size_t(aa)];
      qc[i] = dot;
      for (int aa = 0; aa < dim_; ++aa) res[size_t(aa)] -= dot * f.q[i][size_t(aa)];
    }
    a.assign(r, 0.0);
    double asum = 0.0;
    bool valid = true;
    for (size_t i = 0; i < r; ++i) {
      double acc = 0.0;
      for (size_t k = i; k < r; ++k) acc += f.rinv[i][k] * qc[k];
      a[i] = acc;
      asum += acc;
      if (acc < -1e-10) valid = false;
    }
    if (1.0 - asum < -1e-10) valid = false;
    if (!valid) continue;
    const double d = vec_norm(res);
    if (d < best) {
      best = d;
      for (int aa = 0; aa < dim_; ++aa) best_p[size_t(aa)] = x[size_t(aa)] - res[size_t(aa)];
    }
  }
  return best_p;
}

BoxBody::BoxBody(std::string name, Vec sides) : name_(std::move(name)), sides_(std::move(sides)) {
  for (double s : sides_)
    if (!(s >= 0.0)) throw std::invalid_argument("BoxBody: negative side");
}

double BoxBody::distance(const Vec& x) const {
  double acc = 0.0;
  for (size_t i = 0; i < sides_.size(); ++i) {
    const double v = x[i];
    if (v < 0.0)
      acc += v * v;
    else if (v > sides_[i])
      acc += (v - sides_[i]) * (v - sides_[i]);
  }
  return std::sqrt(acc);
}

double BoxBody::slice_distance(const Vec& x, int n) const {
  double acc = 0.0;
  for (size_t i = 0; i < sides_.size(); ++i) {
    const double top = int(i) < n ? sides_[i] : 0.0;
    const double v = x[i];
    if (v < 0.0)
      acc += v * v;
    else if (v > top)
      acc += (v - top) * (v - top);
  }
  return std::sqrt(acc);
}

std::vector<Vec> BoxBody::sample_slice(int n, double h) const {
  const int d = dim();
  const int k = std::min(n, d);
  if (k <= 0) return {Vec(size_t(d), 0.0)};
  int active = 0;
  for (int i = 0; i < k; ++i)
    if (sides_[size_t(i)] > 0.0) ++active;
  const double pitch = h / std::sqrt(double(std::max(active, 1)));
  std::vector<std::vector<double>> grids;
  for (int i = 0; i < d; ++i)
    grids.push_back(i < k ? axis_grid(sides_[size_t(i)], pitch) : std::vector<double>{0.0});
  std::vector<Vec> out;
  std::vector<size_t> ix(size_t(d), 0);
  for (;;) {
    Vec p(size_t(d), 0.0);
    for (int i = 0; i < d; ++i) p[size_t(i)] = grids[size_t(i)][ix[size_t(i)]];
    out.push_back(std::move(p));
    int a = 0;
    for (;; ++a) {
      if (a == d) return out;
      if (++ix[size_t(a)] < grids[size_t(a)].size()) break;
      ix[size_t(a)] = 0;
    }
  }
}

std::vector<Vec> BoxBody::vertices() const {
  const int d = dim();
  std::vector<Vec> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Vec v(size_t(d), 0.0);
    for (int i = 0; i < d; ++i) v[size_t(i)] = (mask & (1u << i)) ? sides_[size_t(i)] : 0.0;
    out.push_back(std::move(v));
  }
  return out;
}

Vec BoxBody::bbox_lo() const { return Vec(sides_.size(), 0.0); }
Vec BoxBody::bbox_hi() const { return sides_; }

CoordSimplexBody::CoordSimplexBody(std::string name, Vec axes)
    : name_(std::move(name)), axes_(std::move(axes)) {
  for (double a : axes_)
    if (!(a > 0.0)) throw std::invalid_argument("CoordSimplexBody: axes must be positive");
  const int d = dim();
  for (int n = 0; n <= d; ++n) {
    std::vector<Vec> vs{Vec(size_t(d), 0.0)};
    for (int i = 0; i < n; ++i) {
      Vec v(size_t(d), 0.0);
      v[size_t(i)] = axes_[size_t(i)];
      vs.push_back(std::move(v));
    }
    slice_hulls_.emplace_back(std::move(vs));
  }
}

double CoordSimplexBody::distance(const Vec& x) const {
  return slice_hulls_.back().distance(x);
}

bool CoordSimplexBody::contains(const Vec& x, double tol) const {
  double budget = 0.0;
  for (size_t i = 0; i < axes_.size(); ++i) {
    if (x[i] < -tol) return false;
    budget += std::max(x[i], 0.0) / axes_[i];
  }
  return budget <= 1.0 + tol;
}

double CoordSimplexBody::slice_distance(const Vec& x, int n) const {
  return slice_hulls_[size_t(std::min(n, dim()))].distance(x);
}

std::vector<Vec> CoordSimplexBody::sample_slice(int n, double h) const {
  const int d = dim();
  const int k = std::min(n, d);
  if (k <= 0) return {Vec(size_t(d), 0.0)};
  const auto& hull = slice_hulls_[size_t(k)];
  const double pitch = h / std::sqrt(double(k));
  std::vector<std::vector<double>> grids;
  for (int i = 0; i < d; ++i)
    grids.push_back(i < k ? axis_grid(axes_[size_t(i)], pitch) : std::vector<double>{0.0});
  // lattice points near the slice get projected onto it, which keeps the
  // output inside the body without losing density at the boundary
  std::vector<Vec> out;
  std::vector<size_t> ix(size_t(d), 0);
  for (;;) {
    Vec p(size_t(d), 0.0);
    for (int i = 0; i < d; ++i) p[size_t(i)] = grids[size_t(i)][ix[size_t(i)]];
    const double dd = hull.distance(p);
    if (dd <= 0.5 * h) out.push_back(dd > 0.0 ? hull.project(p) : p);
    int a = 0;
    for (;; ++a) {
      if (a == d) return out;
      if (++ix[size_t(a)] < grids[size_t(a)].size()) break;
      ix[size_t(a)] = 0;
    }
  }
}

std::vector<Vec> CoordSimplexBody::vertices() const {
  return slice_hulls_.back().verts();
}

Vec CoordSimplexBody::bbox_lo() const { return Vec(axes_.size(), 0.0); }
Vec CoordSimplexBody::bbox_hi() const { return axes_; }

FlatImageBody::FlatImageBody(std::string name, FlatWeights weights, double mu,
                             int ambient_dim)
    : name_(std::move(name)), weights_(std::move(weights)), mu_(mu), ambient_(ambient_dim) {
  if (ambient_ < 2) throw std::invalid_argument("FlatImageBody: ambient dim too small");
  if (!(mu_ > 0.0)) throw std::invalid_argument("FlatImageBody: mu must be positive");
  for (int j = 1; j <= ambient_ - 1; ++j) {
    std::vector<Vec> vs{Vec(size_t(ambient_), 0.0), w_column(0)};
    for (int i = 1; i <= j; ++i) vs.push_back(w_column(i));
    slice_hulls_.emplace_back(std::move(vs));
  }
}

Vec FlatImageBody::w_column(int k) const {
  Vec v(size_t(ambient_), 0.0);
  const int top = (k == 0) ? ambient_ : k;
  for (int i = 1; i <= top; ++i) v[size_t(i - 1)] = mu_ * weights_.alpha(i);
  return v;
}

double FlatImageBody::distance(const Vec& x) const {
  return slice_hulls_.back().distance(x);
}

bool FlatImageBody::contains(const Vec& x, double tol) const {
  return distance(x) <= tol;
}

double FlatImageBody::slice_distance(const Vec& x, int n) const {
  if (n <= 0) return vec_norm(x);
  return slice_hulls_[size_t(std::min(n, ambient_ - 1) - 1)].distance(x);
}

std::vector<Vec> FlatImageBody::sample_slice(int n, double h) const {
  const int d = ambient_;
  if (n <= 0) return {Vec(size_t(d), 0.0)};
  const int k = std::min(n, d - 1);
  // scaled profile s_1 >= ... >= s_k >= t0 >= 0 (coordinates past k ride on
  // t0); each variable gets its own pitch so thin directions stay resolved
  std::vector<std::vector<double>> grids;
  for (int i = 1; i <= k; ++i)
    grids.push_back(axis_grid(mu_, h / (2.0 * weights_.alpha(i))));
  grids.push_back(axis_grid(mu_, h / (2.0 * weights_.alpha(k + 1))));

  std::vector<Vec> out;
  std::vector<double> s(size_t(k) + 1, 0.0);
  auto emit = [&]() {
    Vec x(size_t(d), 0.0);
    for (int a = 1; a <= d; ++a) {
      const double prof = a <= k ? s[size_t(a - 1)] : s[size_t(k)];
      x[size_t(a - 1)] = prof * weights_.alpha(a);
    }
    out.push_back(std::move(x));
  };
  // nested descent over the monotone chain
  std::function<void(int, double)> rec = [&](int var, double cap) {
    if (var > k) {
      emit();
      return;
    }
    for (double v : grids[size_t(var)]) {
      if (v > cap) break;
      s[size_t(var)] = v;
      rec(var + 1, v);
    }
  };
  rec(0, mu_);
  return out;
}

std::vector<Vec> FlatImageBody::vertices() const { return slice_hulls_.back().verts(); }

Vec FlatImageBody::bbox_lo() const { return Vec(size_t(ambient_), 0.0); }

Vec FlatImageBody::bbox_hi() const { return w_column(0); }

std::unique_ptr<ConvexBody> make_body(const std::string& preset) {
  if (preset == "segment2d") return std::make_unique<BoxBody>(preset, Vec{1.0, 0.0});
  if (preset == "thinbox2d") return std::make_unique<BoxBody>(preset, Vec{0.95, 0.002});
  if (preset == "thinbox2dexp") return std::make_unique<BoxBody>(preset, Vec{0.7, 0.3});
  if (preset == "simplex3d")
    return std::make_unique<CoordSimplexBody>(preset, Vec{0.8, 0.4, 0.2});
  if (preset == "flat4d") {
    FlatWeights w;
    w.c = 0.5;
    w.q = 0.5;
    w.basis_constant = 1.0;
    w.schedule = RSchedule::exponential(0.5);
    return std::make_unique<FlatImageBody>(preset, w, 1.0, 4);
  }
  throw std::invalid_argument("make_body: unknown preset '" + preset + "'");
}

}  // namespace fpf::pou
