#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fpfree/csv.hpp"
#include "fpfree/report.hpp"
#include "fpfree/rng.hpp"

using namespace fpf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("fpfree-test-" + tag);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config: full round trip with comments and spacing") {
  const ExperimentConfig cfg = parse_config_text(
      "# experiment description\n"
      "schema = fpfree-exp-1\n"
      "\n"
      "experiment = ar-decay   # trailing comment\n"
      "target=lin:l2\n"
      "  samples =  7\n"
      "horizon = 12\n"
      "seed = 99\n"
      "out = /tmp/somewhere\n"
      "svg = off\n"
      "bound-scale = 2.5\n");
  CHECK(cfg.experiment == "ar-decay");
  CHECK(cfg.target == "lin:l2");
  CHECK(cfg.samples == 7);
  CHECK(cfg.horizon == 12);
  CHECK(cfg.seed == 99);
  CHECK(cfg.out_dir == "/tmp/somewhere");
  CHECK_FALSE(cfg.svg);
  CHECK(cfg.bound_scale == 2.5);
}

TEST_CASE("config: defaults fill everything but the required trio") {
  const ExperimentConfig cfg = parse_config_text(
      "schema = fpfree-exp-1\nexperiment = flatness\ntarget = medina:segment2d\n");
  CHECK(cfg.samples == 100);
  CHECK(cfg.horizon == 50);
  CHECK(cfg.seed == 1);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.svg);
  CHECK(cfg.bound_scale == 1.0);
}

TEST_CASE("config: every malformed input is rejected with context") {
  auto bad = [](const std::string& text, const std::string& needle) {
    try {
      parse_config_text(text);
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  const std::string head = "schema = fpfree-exp-1\nexperiment = e\ntarget = t\n";
  bad(head + "bogus = 1\n", "unknown key 'bogus'");
  bad(head + "bogus = 1\n", "line 4");
  bad("experiment = e\ntarget = t\n", "missing 'schema");
  bad("schema = fpfree-exp-2\n", "unsupported schema");
  bad("schema = fpfree-exp-1\ntarget = t\n", "missing 'experiment'");
  bad("schema = fpfree-exp-1\nexperiment = e\n", "missing 'target'");
  bad(head + "samples = soon\n", "needs an integer");
  bad(head + "samples = 12x\n", "needs an integer");
  bad(head + "samples = 0\n", "samples must be >= 1");
  bad(head + "horizon = -2\n", "horizon must be >= 1");
  bad(head + "seed = -1\n", "seed must be >= 0");
  bad(head + "svg = maybe\n", "needs true/false");
  bad(head + "bound-scale = 0\n", "bound-scale must be positive");
  bad(head + "bound-scale = abc\n", "needs a number");
  bad(head + "stray line\n", "expected 'key = value'");
  bad(head + "samples =\n", "empty key or value");
}

TEST_CASE("config: file loading") {
  const fs::path p = fs::temp_directory_path() / "fpfree-test-config.txt";
  std::ofstream(p) << "schema = fpfree-exp-1\nexperiment = ar-decay\ntarget = lin:l2\n";
  const ExperimentConfig cfg = parse_config_file(p.string());
  CHECK(cfg.experiment == "ar-decay");
  CHECK_THROWS_AS(parse_config_file((p / "nope").string()), ConfigError);
  fs::remove(p);
}

TEST_CASE("csv: numbers round-trip and special values are spelled out") {
  CHECK(csv_num(0.5) == "0.5");
  CHECK(csv_num(std::nan("")) == "nan");
  CHECK(csv_num(1.0 / 0.0) == "inf");
  CHECK(csv_num(-1.0 / 0.0) == "-inf");
  Rng rng(71);
  for (int i = 0; i < 500; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), int(rng.uniform(-300.0, 300.0)));
    CHECK(std::stod(csv_num(v)) == v);
    CHECK(csv_num(v) == csv_num(v));
  }
}

TEST_CASE("csv: quoting and rows") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  std::ostringstream os;
  csv_row(os, {"a", "1,5", "c"});
  CHECK(os.str() == "a,\"1,5\",c\n");
}

TEST_CASE("run: configuration failures come back as exit 3") {
  ExperimentConfig cfg;
  cfg.experiment = "no-such-experiment";
  cfg.target = "lin:l2";
  cfg.out_dir = fresh_dir("cfg3a").string();
  RunResult r = run_experiment(cfg);
  CHECK(r.exit_code == kExitConfig);
  CHECK(r.summary.find("unknown experiment") != std::string::npos);

  cfg.experiment = "ar-decay";
  cfg.target = "lin:xyz";
  r = run_experiment(cfg);
  CHECK(r.exit_code == kExitConfig);

  cfg.target = "planet:mars";
  r = run_experiment(cfg);
  CHECK(r.exit_code == kExitConfig);

  cfg.experiment = "flatness";  // needs a flat or body target
  cfg.target = "lin:l2";
  r = run_experiment(cfg);
  CHECK(r.exit_code == kExitConfig);

  cfg.experiment = "retraction-check";  // body experiment on a map target
  r = run_experiment(cfg);
  CHECK(r.exit_code == kExitConfig);
}

TEST_CASE("run: a passing experiment writes the full output set") {
  ExperimentConfig cfg;
  cfg.experiment = "ar-decay";
  cfg.target = "lin:l2";
  cfg.samples = 3;
  cfg.horizon = 40;
  cfg.seed = 5;
  const fs::path dir = fresh_dir("ok");
  cfg.out_dir = dir.string();
  const RunResult r = run_experiment(cfg);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.summary.find("ar-decay on lin:l2:") != std::string::npos);
  CHECK(r.summary.find("checks passed") != std::string::npos);
  CHECK(r.out_dir == cfg.out_dir);

  CHECK(fs::exists(dir / "manifest.txt"));
  CHECK(fs::exists(dir / "data.csv"));
  CHECK(fs::exists(dir / "verdicts.csv"));
  CHECK(fs::exists(dir / "plot.svg"));

  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("experiment=ar-decay\n") != std::string::npos);
  CHECK(manifest.find("version=" + library_version() + "\n") != std::string::npos);
  // keys are emitted sorted, so the manifest itself is reproducible
  CHECK(manifest.find("bound-scale=") < manifest.find("experiment="));
  CHECK(manifest.find("experiment=") < manifest.find("version="));

  const std::string verdicts = slurp(dir / "verdicts.csv");
  CHECK(verdicts.rfind("check,observed,bound,bound_scaled,verdict\n", 0) == 0);
  CHECK(verdicts.find(",fail") == std::string::npos);

  SUBCASE("svg can be disabled") {
    cfg.svg = false;
    cfg.out_dir = fresh_dir("nosvg").string();
    CHECK(run_experiment(cfg).exit_code == kExitOk);
    CHECK_FALSE(fs::exists(fs::path(cfg.out_dir) / "plot.svg"));
    fs::remove_all(cfg.out_dir);
  }
  fs::remove_all(dir);
}

TEST_CASE("run: reruns with the same config are byte-identical") {
  ExperimentConfig cfg;
  cfg.experiment = "ar-decay";
  cfg.target = "lin:l2";
  cfg.samples = 2;
  cfg.horizon = 25;
  cfg.seed = 31;
  const fs::path a = fresh_dir("rep-a");
  const fs::path b = fresh_dir("rep-b");
  cfg.out_dir = a.string();
  REQUIRE(run_experiment(cfg).exit_code == kExitOk);
  cfg.out_dir = b.string();
  REQUIRE(run_experiment(cfg).exit_code == kExitOk);
  for (const char* f : {"data.csv", "verdicts.csv", "plot.svg"})
    CHECK(slurp(a / f) == slurp(b / f));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("run: an impossible tolerance turns into exit 2, not a throw") {
  ExperimentConfig cfg;
  cfg.experiment = "ar-decay";
  cfg.target = "lin:l2";
  cfg.samples = 2;
  cfg.horizon = 25;
  cfg.bound_scale = 1e-9;
  const fs::path dir = fresh_dir("viol");
  cfg.out_dir = dir.string();
  const RunResult r = run_experiment(cfg);
  CHECK(r.exit_code == kExitBoundViolation);
  CHECK(slurp(dir / "verdicts.csv").find(",fail") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run: unwritable output directory is exit 5") {
  const fs::path file = fs::temp_directory_path() / "fpfree-test-blocker";
  std::ofstream(file) << "x";
  ExperimentConfig cfg;
  cfg.experiment = "ar-decay";
  cfg.target = "lin:l2";
  cfg.samples = 1;
  cfg.horizon = 5;
  cfg.out_dir = (file / "sub").string();
  const RunResult r = run_experiment(cfg);
  CHECK(r.exit_code == kExitIo);
  CHECK(r.summary.find("cannot create output directory") != std::string::npos);
  fs::remove(file);
}

TEST_CASE("version string is the published one") {
  CHECK(library_version() == "0.1.0");
}
