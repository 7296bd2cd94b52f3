#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fpfree/rng.hpp"
#include "fpfree/seq.hpp"

using namespace fpf;

TEST_CASE("norm oracles on a hand vector") {
  const Coeffs x = Coeffs::from_dense({3.0, -4.0});
  CHECK(norm(x, SpaceSpec::l2()) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm(x, SpaceSpec::l1()) == 7.0);
  CHECK(norm(x, SpaceSpec::sup()) == 4.0);
  CHECK(norm(x, SpaceSpec::lp(3.0)) ==
        doctest::Approx(std::cbrt(27.0 + 64.0)).epsilon(1e-15));
  CHECK(norm(Coeffs::zero(), SpaceSpec::l2()) == 0.0);
  CHECK(norm(Coeffs::unit(17), SpaceSpec::lp(1.5)) == 1.0);
}

TEST_CASE("space construction guards") {
  CHECK_THROWS_AS(SpaceSpec::lp(0.5), std::invalid_argument);
  CHECK(SpaceSpec::l2().label() == "l2");
  CHECK(SpaceSpec::lp(1.5).label() == "l1.5");
  CHECK(SpaceSpec::sup().label() == "sup");
  CHECK(SpaceSpec::l1().basis_constant == 1.0);
}

TEST_CASE("canonical form: no explicit zeros, increasing indices") {
  const Coeffs x = Coeffs::from_dense({0.0, 2.0, 0.0, -1.0});
  REQUIRE(x.entries.size() == 2);
  CHECK(x.entries[0].index == 2);
  CHECK(x.entries[1].index == 4);
  CHECK(x.bound == 4);
  CHECK(x.coord(1) == 0.0);
  CHECK(x.coord(2) == 2.0);
  CHECK(x.coord(4) == -1.0);
  CHECK(x.max_index() == 4);

  const Coeffs y = Coeffs::from_entries({{5, 1.0}, {2, 3.0}, {9, 0.0}});
  REQUIRE(y.entries.size() == 2);
  CHECK(y.entries[0].index == 2);
  CHECK(y.entries[1].index == 5);
  CHECK(y.bound == 5);  // dropped zeros do not witness the support bound
  CHECK_THROWS_AS(Coeffs::from_entries({{1, 1.0}, {1, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Coeffs::from_entries({{0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Coeffs::unit(0), std::invalid_argument);
}

TEST_CASE("dense round trip") {
  const Coeffs x = Coeffs::from_entries({{2, 0.5}, {6, -0.25}});
  const auto v = x.dense(6);
  REQUIRE(v.size() == 6);
  CHECK(v[1] == 0.5);
  CHECK(v[5] == -0.25);
  CHECK(Coeffs::from_dense(v) == x);
  CHECK(x.dense(3).size() == 3);  // truncation just drops the tail
}

TEST_CASE("shift is an isometry in every supported norm") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(12);
    for (auto& t : v) t = rng.uniform(-1.0, 1.0);
    const Coeffs x = Coeffs::from_dense(v);
    const Coeffs y = shift_right(x);
    CHECK(y.coord(1) == 0.0);
    CHECK(y.max_index() == x.max_index() + 1);
    CHECK(y.bound == x.bound + 1);
    for (const auto& s :
         {SpaceSpec::l1(), SpaceSpec::l2(), SpaceSpec::lp(1.5), SpaceSpec::sup()})
      CHECK(norm(y, s) == norm(x, s));  // same multiset of values, exact
  }
}

TEST_CASE("fundamental function") {
  CHECK(fundamental_function(4, SpaceSpec::l2()) == doctest::Approx(2.0));
  CHECK(fundamental_function(9, SpaceSpec::l2()) == doctest::Approx(3.0));
  CHECK(fundamental_function(5, SpaceSpec::l1()) == 5.0);
  CHECK(fundamental_function(8, SpaceSpec::lp(1.5)) ==
        doctest::Approx(std::pow(8.0, 2.0 / 3.0)));
  CHECK(fundamental_function(1000, SpaceSpec::sup()) == 1.0);
  CHECK_THROWS_AS(fundamental_function(0, SpaceSpec::l2()), std::invalid_argument);
}

TEST_CASE("sparse arithmetic identities") {
  const Coeffs a = Coeffs::from_entries({{1, 1.0}, {3, 2.0}});
  const Coeffs b = Coeffs::from_entries({{2, -1.0}, {3, -2.0}});
  const Coeffs s = add(a, b);
  REQUIRE(s.entries.size() == 2);  // index 3 cancelled away entirely
  CHECK(s.coord(1) == 1.0);
  CHECK(s.coord(2) == -1.0);
  CHECK(s.coord(3) == 0.0);
  CHECK(sub(s, s) == Coeffs::zero());
  CHECK(scale(a, 0.0) == Coeffs::zero());
  CHECK(scale(scale(a, 2.0), 0.5) == a);
  CHECK(dist(a, a, SpaceSpec::l2()) == 0.0);
  CHECK(dist(a, b, SpaceSpec::l1()) ==
        doctest::Approx(1.0 + 1.0 + 4.0).epsilon(1e-15));
}

TEST_CASE("arithmetic keeps the larger support bound") {
  Coeffs a = Coeffs::unit(2);
  a.bound = 10;
  const Coeffs b = Coeffs::unit(5);
  CHECK(add(a, b).bound == 10);
  CHECK(sub(b, a).bound == 10);
}
