#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fpfree.h"

namespace fs = std::filesystem;

TEST_CASE("version and error channel") {
  CHECK(std::string(fpf_version()) == "0.1.0");
  fpf_map* m = nullptr;
  CHECK(fpf_map_create("planet:mars", &m) == FPF_ERR_UNKNOWN_TARGET);
  CHECK(m == nullptr);
  CHECK(std::string(fpf_last_error()).find("unknown target family") !=
        std::string::npos);
}

TEST_CASE("target catalog") {
  int needed = 0;
  CHECK(fpf_list_targets(nullptr, 0, &needed) == FPF_ERR_BUFFER_TOO_SMALL);
  REQUIRE(needed > 1);
  std::vector<char> buf(static_cast<size_t>(needed));
  REQUIRE(fpf_list_targets(buf.data(), needed, &needed) == FPF_OK);
  const std::string rows(buf.data());
  CHECK(rows.find("lin:l2\t") != std::string::npos);
  CHECK(rows.find("medina:segment2d\t") != std::string::npos);
  CHECK(rows.find("\tmap\n") != std::string::npos);
  CHECK(rows.find("\tbody\n") != std::string::npos);
  // one byte short must fail the same way
  CHECK(fpf_list_targets(buf.data(), needed - 1, nullptr) ==
        FPF_ERR_BUFFER_TOO_SMALL);
}

TEST_CASE("map lifecycle: eval, buffers, domain errors") {
  fpf_map* m = nullptr;
  REQUIRE(fpf_map_create("lin:l2", &m) == FPF_OK);
  REQUIRE(m != nullptr);

  double out[4] = {9, 9, 9, 9};
  CHECK(fpf_map_eval(m, nullptr, 0, out, 4) == FPF_OK);  // F(0) = x_1
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 0.0);

  const double e1[1] = {1.0};
  CHECK(fpf_map_eval(m, e1, 1, out, 4) == FPF_OK);  // F(x_1) support {1,2}
  CHECK(out[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(out[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(fpf_map_eval(m, e1, 1, out, 1) == FPF_ERR_BUFFER_TOO_SMALL);
  CHECK(std::string(fpf_last_error()).find("output buffer") != std::string::npos);

  const double outside[1] = {2.0};  // not in the cap
  CHECK(fpf_map_eval(m, outside, 1, out, 4) == FPF_ERR_DOMAIN);

  CHECK(fpf_map_eval(nullptr, e1, 1, out, 4) == FPF_ERR_INVALID_ARGUMENT);
  CHECK(fpf_map_eval(m, e1, -1, out, 4) == FPF_ERR_INVALID_ARGUMENT);
  fpf_map_destroy(m);
  fpf_map_destroy(nullptr);  // must be a no-op
}

TEST_CASE("orbit gaps through the C surface") {
  fpf_map* m = nullptr;
  REQUIRE(fpf_map_create("affine:q=0.5", &m) == FPF_OK);
  double gaps[12];
  double mind = -1.0;
  REQUIRE(fpf_map_orbit_gaps(m, 12, gaps, &mind) == FPF_OK);
  double lo = gaps[0];
  for (double g : gaps) {
    CHECK(g > 0.0);
    lo = std::min(lo, g);
  }
  CHECK(mind == lo);
  CHECK(fpf_map_orbit_gaps(m, 0, gaps, nullptr) == FPF_ERR_INVALID_ARGUMENT);
  CHECK(fpf_map_orbit_gaps(m, 4, nullptr, nullptr) == FPF_ERR_INVALID_ARGUMENT);
  fpf_map_destroy(m);
}

TEST_CASE("body lifecycle: distance, membership, retraction") {
  fpf_body* b = nullptr;
  REQUIRE(fpf_body_create("segment2d", &b) == FPF_OK);  // bare preset name works
  REQUIRE(b != nullptr);
  CHECK(fpf_body_dim(b) == 2);
  CHECK(fpf_body_dim(nullptr) == 0);

  const double x[2] = {0.5, 3.0};
  double d = 0.0;
  REQUIRE(fpf_body_distance(b, x, 2, &d) == FPF_OK);
  CHECK(d == 3.0);

  int inside = -1;
  const double on[2] = {0.5, 0.0};
  REQUIRE(fpf_body_contains(b, on, 2, &inside) == FPF_OK);
  CHECK(inside == 1);
  REQUIRE(fpf_body_contains(b, x, 2, &inside) == FPF_OK);
  CHECK(inside == 0);

  double r[2] = {0, 0};
  REQUIRE(fpf_body_retract(b, x, 2, r) == FPF_OK);
  double rd = 0.0;
  REQUIRE(fpf_body_distance(b, r, 2, &rd) == FPF_OK);
  CHECK(rd <= 1e-9);
  CHECK(std::hypot(r[0] - x[0], r[1] - x[1]) <= 9.0 * d);

  CHECK(fpf_body_distance(b, x, 1, &d) == FPF_ERR_INVALID_ARGUMENT);
  CHECK(fpf_body_retract(b, x, 3, r) == FPF_ERR_INVALID_ARGUMENT);
  fpf_body_destroy(b);
  fpf_body_destroy(nullptr);

  fpf_body* nb = nullptr;
  CHECK(fpf_body_create("dodecahedron", &nb) == FPF_ERR_UNKNOWN_TARGET);
  CHECK(nb == nullptr);

  fpf_body* pb = nullptr;  // the prefixed spelling resolves to the same preset
  REQUIRE(fpf_body_create("medina:segment2d", &pb) == FPF_OK);
  CHECK(fpf_body_dim(pb) == 2);
  fpf_body_destroy(pb);
}

TEST_CASE("experiment runner end to end") {
  const fs::path dir = fs::temp_directory_path() / "fpfree-capi-run";
  fs::remove_all(dir);
  const fs::path cfgp = fs::temp_directory_path() / "fpfree-capi.cfg";
  std::ofstream(cfgp) << "schema = fpfree-exp-1\n"
                      << "experiment = ar-decay\n"
                      << "target = lin:l2\n"
                      << "samples = 2\n"
                      << "horizon = 20\n"
                      << "out = " << (dir / "ignored").string() << "\n";

  int code = -1;
  char summary[256] = {0};
  REQUIRE(fpf_run_experiment(cfgp.string().c_str(), (dir / "real").string().c_str(),
                             7, 1, &code, summary, sizeof summary) == FPF_OK);
  CHECK(code == 0);
  CHECK(std::string(summary).find("checks passed") != std::string::npos);
  CHECK(fs::exists(dir / "real" / "manifest.txt"));
  CHECK(fs::exists(dir / "real" / "verdicts.csv"));
  CHECK_FALSE(fs::exists(dir / "real" / "plot.svg"));  // no_svg flag
  CHECK_FALSE(fs::exists(dir / "ignored"));            // out_override wins

  CHECK(fpf_run_experiment("/no/such/file.cfg", nullptr, -1, 0, &code, nullptr,
                           0) == FPF_ERR_CONFIG);
  CHECK(code == 3);
  CHECK(fpf_run_experiment(nullptr, nullptr, -1, 0, &code, nullptr, 0) ==
        FPF_ERR_INVALID_ARGUMENT);
  fs::remove(cfgp);
  fs::remove_all(dir);
}
