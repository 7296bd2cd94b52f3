#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fpfree/bodies.hpp"
#include "fpfree/pou.hpp"
#include "fpfree/rng.hpp"

using namespace fpf;
using namespace fpf::pou;

TEST_CASE("vector helpers") {
  CHECK(vec_norm({3.0, 4.0}) == 5.0);
  CHECK(vec_dist({1.0, 1.0}, {1.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(vec_dist({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("level index walks the schedule") {
  const RSchedule e = RSchedule::exponential(0.5);
  CHECK(level_index(1.0, e) == 0);
  CHECK(level_index(0.5, e) == 1);
  CHECK(level_index(0.3, e) == 2);
  const RSchedule h = RSchedule::holder(0.5);  // r_n = 400^-n
  CHECK(level_index(2.0, h) == 0);
  CHECK(level_index(0.0025, h) == 1);
  CHECK(level_index(0.001, h) == 2);
  CHECK(level_index(1e-6, h) == 3);
  CHECK_THROWS_AS(level_index(0.0, e), std::invalid_argument);
}

TEST_CASE("polytope distance on a triangle") {
  const PolytopeDistance T({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  CHECK(T.distance({0.25, 0.25}) == 0.0);
  CHECK(T.distance({2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(T.distance({1.0, 1.0}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(T.distance({-1.0, -1.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const Vec p = T.project({2.0, 0.0});
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-10));
  const Vec q = T.project({1.0, 1.0});
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(PolytopeDistance({}), std::invalid_argument);
}

TEST_CASE("polytope distance against a dense grid oracle") {
  const PolytopeDistance T({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  Rng rng(3);
  const double h = 0.01;
  for (int trial = 0; trial < 60; ++trial) {
    const Vec x{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
    double grid = 1e300;
    for (double a = 0.0; a <= 1.0 + 1e-12; a += h)
      for (double b = 0.0; b <= 1.0 - a + 1e-12; b += h)
        grid = std::min(grid, std::hypot(x[0] - a, x[1] - b));
    CHECK(T.distance(x) <= grid + 1e-10);   // beats every feasible grid point
    CHECK(T.distance(x) >= grid - h);       // grid is h-dense in the triangle
  }
}

TEST_CASE("box body: segment") {
  const BoxBody seg("segment2d", {1.0, 0.0});
  CHECK(seg.dim() == 2);
  CHECK(seg.distance({0.5, 3.0}) == 3.0);
  CHECK(seg.distance({2.0, 0.0}) == 1.0);
  CHECK(seg.distance({-1.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(seg.distance({0.7, 0.0}) == 0.0);
  CHECK(seg.contains({0.7, 0.0}));
  CHECK_FALSE(seg.contains({0.7, 0.1}));
  CHECK(seg.slice_distance({0.7, 0.2}, 0) == doctest::Approx(std::hypot(0.7, 0.2)));
  CHECK(seg.slice_distance({0.7, 0.2}, 1) == doctest::Approx(0.2));
  CHECK(seg.vertices().size() == 4);  // degenerate axis duplicates corners
  CHECK(seg.max_norm() == 1.0);
  CHECK_THROWS_AS(BoxBody("bad", {-1.0}), std::invalid_argument);
}

TEST_CASE("box slice samples are dense") {
  const BoxBody box("thinbox2dexp", {0.7, 0.3});
  const double h = 0.05;
  const auto samples = box.sample_slice(2, h);
  REQUIRE(!samples.empty());
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec p{rng.uniform(0.0, 0.7), rng.uniform(0.0, 0.3)};
    double best = 1e300;
    for (const auto& s : samples) best = std::min(best, vec_dist(p, s));
    CHECK(best <= h);
  }
  for (const auto& s : samples) CHECK(box.contains(s));
  // slice 0 collapses to the origin
  REQUIRE(box.sample_slice(0, h).size() == 1);
  CHECK(vec_norm(box.sample_slice(0, h)[0]) == 0.0);
}

TEST_CASE("coordinate simplex body") {
  const CoordSimplexBody S("simplex3d", {0.8, 0.4, 0.2});
  CHECK(S.contains({0.0, 0.0, 0.0}));
  CHECK(S.contains({0.8, 0.0, 0.0}));
  CHECK(S.contains({0.4, 0.2, 0.0}));   // budget 0.5 + 0.5
  CHECK_FALSE(S.contains({0.8, 0.4, 0.2}));
  CHECK_FALSE(S.contains({-0.1, 0.0, 0.0}));
  CHECK(S.distance({0.4, 0.1, 0.0}) == 0.0);

  // grid oracle over barycentric coordinates
  Rng rng(17);
  const double step = 0.02;
  for (int trial = 0; trial < 25; ++trial) {
    const Vec x{rng.uniform(-0.2, 1.0), rng.uniform(-0.2, 0.6), rng.uniform(-0.2, 0.4)};
    double grid = 1e300;
    for (double b1 = 0.0; b1 <= 1.0 + 1e-12; b1 += step)
      for (double b2 = 0.0; b2 <= 1.0 - b1 + 1e-12; b2 += step)
        for (double b3 = 0.0; b3 <= 1.0 - b1 - b2 + 1e-12; b3 += step) {
          const double dx = x[0] - 0.8 * b1;
          const double dy = x[1] - 0.4 * b2;
          const double dz = x[2] - 0.2 * b3;
          grid = std::min(grid, std::sqrt(dx * dx + dy * dy + dz * dz));
        }
    CHECK(S.distance(x) <= grid + 1e-10);
    CHECK(S.distance(x) >= grid - 0.03);  // bary step 0.02 over diameter < 1.2
  }
  CHECK_THROWS_AS(CoordSimplexBody("bad", {0.0}), std::invalid_argument);
}

TEST_CASE("heights of the preset bodies") {
  const auto seg = make_body("segment2d");
  const auto hs = body_heights(*seg, 2);
  REQUIRE(hs.size() == 3);
  CHECK(hs[0] == 1.0);
  CHECK(hs[1] == 0.0);
  CHECK(hs[2] == 0.0);

  const auto sim = make_body("simplex3d");
  const auto hv = body_heights(*sim, 3);
  CHECK(hv[0] == doctest::Approx(0.8));
  CHECK(hv[1] == doctest::Approx(0.4));
  CHECK(hv[2] == doctest::Approx(0.2));
  CHECK(hv[3] == doctest::Approx(0.0).scale(1.0));

  // the flat preset's heights sit under its weight-family tail budget
  const auto flat = make_body("flat4d");
  const auto* fb = dynamic_cast<const FlatImageBody*>(flat.get());
  REQUIRE(fb != nullptr);
  const auto hf = body_heights(*flat, 3);
  for (int n = 1; n <= 3; ++n)
    CHECK(hf[size_t(n)] <= 3.0 * fb->weights().tail_sum(n + 2) + 1e-12);
  CHECK_THROWS_AS(make_body("nosuch"), std::invalid_argument);
}

TEST_CASE("flat image body columns") {
  FlatWeights w;
  w.c = 0.5;
  w.q = 0.5;
  const FlatImageBody B("flat", w, 1.0, 4);
  const auto verts = B.vertices();
  REQUIRE(verts.size() == 5);  // 0, w_0, w_1, w_2, w_3
  CHECK(verts[1] == Vec{0.25, 0.03125, 0.0009765625, 7.62939453125e-06});
  CHECK(verts[2] == Vec{0.25, 0.0, 0.0, 0.0});
  CHECK(verts[3] == Vec{0.25, 0.03125, 0.0, 0.0});
  for (const auto& v : verts) CHECK(B.contains(v));
  CHECK(B.slice_distance({0.1, 0.0, 0.0, 0.0}, 0) == doctest::Approx(0.1));
  CHECK(B.distance({0.1, 0.0, 0.0, 0.0}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("greedy net separation and density") {
  std::vector<Vec> line;
  for (int i = 0; i < 4; ++i) line.push_back({0.3 * i, 0.0});
  const auto net = greedy_net(line, 0.25);
  CHECK(net.size() == 4);  // spacing 0.3 > eps keeps every point

  Rng rng(21);
  std::vector<Vec> cloud;
  for (int i = 0; i < 400; ++i) cloud.push_back({rng.uniform(), rng.uniform()});
  const double eps = 0.1;
  const auto n2 = greedy_net(cloud, eps);
  for (size_t i = 0; i < n2.size(); ++i)
    for (size_t j = i + 1; j < n2.size(); ++j)
      CHECK(vec_dist(n2[i], n2[j]) > eps);
  for (const auto& p : cloud) {
    double best = 1e300;
    for (const auto& q : n2) best = std::min(best, vec_dist(p, q));
    CHECK(best <= eps);
  }
  CHECK(greedy_net({}, 0.1).empty());
}

TEST_CASE("net hierarchy: levels, separation, density") {
  const auto body = make_body("segment2d");
  const RSchedule sched = RSchedule::holder(0.5);
  const HierarchyParams params{-3, 8, 8.0, 8};
  const NetHierarchy H(*body, sched, params);

  CHECK(H.has_level(-3));
  CHECK(H.has_level(8));
  CHECK_FALSE(H.has_level(9));
  CHECK_THROWS_AS(H.level(9), std::out_of_range);

  for (const auto& [m, lvl] : H.levels()) {
    CHECK(lvl.eps == std::ldexp(1.0, -m));
    CHECK(lvl.slice_n == std::min(level_index(lvl.eps, sched), body->dim()));
    for (size_t i = 0; i < lvl.points.size(); ++i) {
      CHECK(body->contains(lvl.points[i], 1e-9));
      for (size_t j = i + 1; j < lvl.points.size(); ++j)
        CHECK(vec_dist(lvl.points[i], lvl.points[j]) > lvl.eps);
    }
    // (eps + pitch)-density over a fresh slice sample
    for (const auto& s : body->sample_slice(lvl.slice_n, lvl.pitch)) {
      double best = 1e300;
      for (const auto& q : lvl.points) best = std::min(best, vec_dist(s, q));
      CHECK(best <= lvl.eps + lvl.pitch);
    }
  }
}

TEST_CASE("partition weights: normalization and cell geometry") {
  const auto body = make_body("segment2d");
  const NetHierarchy H(*body, RSchedule::holder(0.5), {-3, 8, 8.0, 8});
  const auto pts = sample_exterior(*body, 300, 0.02, 0.6, 77);
  for (const auto& x : pts) {
    const double d = body->distance(x);
    const auto rows = H.cell_weights(x);
    REQUIRE(!rows.empty());
    double total = 0.0;
    for (const auto& r : rows) {
      total += r.phi;
      const double to_center = vec_dist(x, r.center);
      CHECK(to_center >= d / 5.0 - 1e-9);
      CHECK(to_center <= 9.0 * d + 1e-9);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(H.cell_weights({0.5, 0.0}).empty());  // interior points carry no cells
  CHECK_THROWS_AS(H.cell_weights({0.5}), std::invalid_argument);
  CHECK_THROWS_AS(H.cell_weights({0.5, 30.0}), std::out_of_range);
}

TEST_CASE("retraction: identity on the body, lands in it, displacement bound") {
  const auto body = make_body("segment2d");
  const NetHierarchy H(*body, RSchedule::holder(0.5), {-3, 8, 8.0, 8});
  CHECK(H.retract({0.25, 0.0}) == Vec{0.25, 0.0});

  const auto pts = sample_exterior(*body, 200, 0.02, 0.6, 5);
  for (const auto& x : pts) {
    const Vec rx = H.retract(x);
    CHECK(body->distance(rx) <= 1e-9);
    CHECK(vec_dist(rx, x) <= 9.0 * body->distance(x) + 1e-9);
    CHECK(H.retract(rx) == rx);
  }
  // the far worked example: (0.5, 3) sits at distance 3, so the retraction
  // may move it at most 27
  const Vec far_img = H.retract({0.5, 3.0});
  CHECK(body->distance(far_img) <= 1e-9);
  CHECK(vec_dist(far_img, {0.5, 3.0}) <= 27.0);
}

TEST_CASE("exterior sampler") {
  const auto body = make_body("segment2d");
  const auto a = sample_exterior(*body, 100, 0.05, 0.5, 11);
  REQUIRE(int(a.size()) == 100);
  for (const auto& x : a) {
    const double d = body->distance(x);
    CHECK(d >= 0.05);
    CHECK(d <= 0.5);
  }
  const auto b = sample_exterior(*body, 100, 0.05, 0.5, 11);
  CHECK(a == b);  // same seed, same points
  CHECK_THROWS_AS(sample_exterior(*body, 10, 0.5, 0.1, 1), std::invalid_argument);
}

TEST_CASE("modulus estimate is monotone and guarded") {
  const auto body = make_body("segment2d");
  const NetHierarchy H(*body, RSchedule::holder(0.5), {-3, 8, 8.0, 8});
  const auto pool = sample_exterior(*body, 60, 0.02, 0.6, 13);
  const std::vector<double> grid{0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  const auto pts = modulus_estimate(H, pool, grid, 5, 10, 3);
  REQUIRE(pts.size() == grid.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].t == grid[i]);
    if (i) CHECK(pts[i].omega >= pts[i - 1].omega);
  }
  CHECK_THROWS_AS(modulus_estimate(H, pool, {}, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(modulus_estimate(H, pool, {0.2, 0.1}, 1, 1, 1),
                  std::invalid_argument);
}
