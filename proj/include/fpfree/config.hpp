#pragma once
#include <stdexcept>
#include <string>

namespace fpf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Flat `key = value` experiment description.  Unknown keys are rejected so a
//! typo cannot silently fall back to a default.
struct ExperimentConfig {
  std::string schema = "fpfree-exp-1";
  std::string experiment;  // ar-decay | lipschitz-estimate | holder-modulus |
                           // flatness | displacement | retraction-check
  std::string target;
  long samples = 100;
  long horizon = 50;
  unsigned long long seed = 1;
  std::string out_dir = "out";
  bool svg = true;
  double bound_scale = 1.0;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace fpf
