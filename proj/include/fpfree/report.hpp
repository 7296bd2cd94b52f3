#pragma once
#include <string>

#include "fpfree/config.hpp"

namespace fpf {

// process exit codes shared by the library surface and the CLI
inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundViolation = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitSolver = 4;
inline constexpr int kExitIo = 5;

std::string library_version();

struct RunResult {
  int exit_code = kExitOk;
  std::string summary;
  std::string out_dir;
};

//! Build the named target, run the experiment's measurement loop, and write
//! manifest.txt, data.csv, verdicts.csv (and plot.svg unless disabled) into
//! cfg.out_dir.  Never throws: every failure mode is folded into the exit
//! code (3 config, 4 solver/internal, 5 unwritable output, 2 bound violation).
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace fpf
