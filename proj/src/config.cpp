#include "fpfree/config.hpp"

#include <fstream>
#include <sstream>

namespace fpf {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const long out = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("config: key '" + key + "' needs true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool schema_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (key == "schema") {
      if (value != cfg.schema)
        throw ConfigError("config: unsupported schema '" + value + "'");
      schema_seen = true;
    } else if (key == "experiment") {
      cfg.experiment = value;
    } else if (key == "target") {
      cfg.target = value;
    } else if (key == "samples") {
      cfg.samples = parse_long(value, key);
      if (cfg.samples < 1) throw ConfigError("config: samples must be >= 1");
    } else if (key == "horizon") {
      cfg.horizon = parse_long(value, key);
      if (cfg.horizon < 1) throw ConfigError("config: horizon must be >= 1");
    } else if (key == "seed") {
      const long s = parse_long(value, key);
      if (s < 0) throw ConfigError("config: seed must be >= 0");
      cfg.seed = static_cast<unsigned long long>(s);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "svg") {
      cfg.svg = parse_bool(value, key);
    } else if (key == "bound-scale") {
      cfg.bound_scale = parse_double(value, key);
      if (!(cfg.bound_scale > 0.0))
        throw ConfigError("config: bound-scale must be positive");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  if (!schema_seen) throw ConfigError("config: missing 'schema = fpfree-exp-1'");
  if (cfg.experiment.empty()) throw ConfigError("config: missing 'experiment'");
  if (cfg.target.empty()) throw ConfigError("config: missing 'target'");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace fpf
