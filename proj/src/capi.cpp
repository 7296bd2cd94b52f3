#include "fpfree.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "fpfree/config.hpp"
#include "fpfree/report.hpp"
#include "fpfree/targets.hpp"
#include "fpfree/transfer.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
fpf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fpf::UnknownTargetError& e) {
    set_error(e.what());
    return FPF_ERR_UNKNOWN_TARGET;
  } catch (const fpf::ConfigError& e) {
    set_error(e.what());
    return FPF_ERR_CONFIG;
  } catch (const fpf::SolverError& e) {
    set_error(e.what());
    return FPF_ERR_SOLVER;
  } catch (const fpf::ConvergenceError& e) {
    set_error(e.what());
    return FPF_ERR_NO_CONVERGENCE;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return FPF_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return FPF_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return FPF_ERR_INTERNAL;
  }
}

}  // namespace

struct fpf_map {
  fpf::MapHandle handle;
};

//! The hierarchy references the body, so both live together and the body
//! member must be declared first.
struct fpf_body {
  fpf::MedinaTarget target;
  std::unique_ptr<fpf::pou::NetHierarchy> hierarchy;
};

extern "C" {

const char* fpf_version(void) {
  static const std::string v = fpf::library_version();
  return v.c_str();
}

const char* fpf_last_error(void) { return g_last_error.c_str(); }

fpf_status fpf_map_create(const char* target, fpf_map** out) {
  if (!target || !out) {
    set_error("fpf_map_create: null argument");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto m = std::make_unique<fpf_map>();
    m->handle = fpf::make_map_target(target);
    *out = m.release();
    return FPF_OK;
  });
}

void fpf_map_destroy(fpf_map* map) { delete map; }

fpf_status fpf_map_eval(fpf_map* map, const double* x, int x_len, double* out,
                        int out_len) {
  if (!map || (!x && x_len > 0) || !out || x_len < 0 || out_len <= 0) {
    set_error("fpf_map_eval: bad argument");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const fpf::Coeffs in =
        fpf::Coeffs::from_dense(std::vector<double>(x, x + x_len));
    const fpf::Coeffs y = map->handle(in);
    if (y.max_index() > out_len) {
      set_error("fpf_map_eval: image support " + std::to_string(y.max_index()) +
                " exceeds the output buffer");
      return FPF_ERR_BUFFER_TOO_SMALL;
    }
    const auto dense = y.dense(out_len);
    std::copy(dense.begin(), dense.end(), out);
    return FPF_OK;
  });
}

fpf_status fpf_map_orbit_gaps(fpf_map* map, int steps, double* gaps,
                              double* min_displacement) {
  if (!map || !gaps || steps <= 0) {
    set_error("fpf_map_orbit_gaps: bad argument");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const fpf::Coeffs seed =
        map->handle.witness_seed ? *map->handle.witness_seed : fpf::Coeffs::zero();
    const fpf::OrbitGaps og = fpf::orbit_gaps(map->handle, seed, steps);
    std::copy(og.gaps.begin(), og.gaps.end(), gaps);
    if (min_displacement) *min_displacement = og.min_displacement;
    return FPF_OK;
  });
}

fpf_status fpf_body_create(const char* preset, fpf_body** out) {
  if (!preset || !out) {
    set_error("fpf_body_create: null argument");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto b = std::make_unique<fpf_body>();
    std::string name(preset);
    if (name.rfind("medina:", 0) != 0) name = "medina:" + name;
    b->target = fpf::make_medina_target(name);
    b->hierarchy = std::make_unique<fpf::pou::NetHierarchy>(
        *b->target.body, b->target.schedule, b->target.params);
    *out = b.release();
    return FPF_OK;
  });
}

void fpf_body_destroy(fpf_body* body) { delete body; }

int fpf_body_dim(const fpf_body* body) {
  return body ? body->target.body->dim() : 0;
}

fpf_status fpf_body_distance(const fpf_body* body, const double* x, int len,
                             double* out) {
  if (!body || !x || !out || len != body->target.body->dim()) {
    set_error("fpf_body_distance: bad argument (length must equal dim)");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = body->target.body->distance(std::vector<double>(x, x + len));
    return FPF_OK;
  });
}

fpf_status fpf_body_contains(const fpf_body* body, const double* x, int len,
                             int* out) {
  if (!body || !x || !out || len != body->target.body->dim()) {
    set_error("fpf_body_contains: bad argument (length must equal dim)");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = body->target.body->contains(std::vector<double>(x, x + len)) ? 1 : 0;
    return FPF_OK;
  });
}

fpf_status fpf_body_retract(const fpf_body* body, const double* x, int len,
                            double* out) {
  if (!body || !x || !out || len != body->target.body->dim()) {
    set_error("fpf_body_retract: bad argument (length must equal dim)");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto r = body->hierarchy->retract(std::vector<double>(x, x + len));
    std::copy(r.begin(), r.end(), out);
    return FPF_OK;
  });
}

fpf_status fpf_list_targets(char* buf, int buf_len, int* needed) {
  return guarded([&] {
    std::ostringstream os;
    for (const auto& t : fpf::list_targets())
      os << t.name << '\t' << t.schema << '\t' << t.kind << '\n';
    const std::string s = os.str();
    const int want = int(s.size()) + 1;
    if (needed) *needed = want;
    if (!buf || buf_len < want) {
      set_error("fpf_list_targets: buffer of " + std::to_string(want) +
                " bytes required");
      return FPF_ERR_BUFFER_TOO_SMALL;
    }
    std::memcpy(buf, s.c_str(), size_t(want));
    return FPF_OK;
  });
}

fpf_status fpf_run_experiment(const char* config_path, const char* out_override,
                              long long seed_override, int no_svg,
                              int* exit_code, char* summary, int summary_cap) {
  if (!config_path || !exit_code) {
    set_error("fpf_run_experiment: null argument");
    return FPF_ERR_INVALID_ARGUMENT;
  }
  *exit_code = fpf::kExitConfig;
  return guarded([&] {
    fpf::ExperimentConfig cfg;
    try {
      cfg = fpf::parse_config_file(config_path);
    } catch (const fpf::ConfigError& e) {
      set_error(e.what());
      *exit_code = fpf::kExitConfig;
      return FPF_ERR_CONFIG;
    }
    if (out_override) cfg.out_dir = out_override;
    if (seed_override >= 0) cfg.seed = static_cast<unsigned long long>(seed_override);
    if (no_svg) cfg.svg = false;
    const fpf::RunResult res = fpf::run_experiment(cfg);
    *exit_code = res.exit_code;
    if (summary && summary_cap > 0) {
      const int n = std::min<int>(summary_cap - 1, int(res.summary.size()));
      std::memcpy(summary, res.summary.data(), size_t(n));
      summary[n] = '\0';
    }
    switch (res.exit_code) {
      case fpf::kExitOk:
        return FPF_OK;
      case fpf::kExitBoundViolation:
        set_error(res.summary);
        return FPF_ERR_BOUND_VIOLATION;
      case fpf::kExitConfig:
        set_error(res.summary);
        return FPF_ERR_CONFIG;
      case fpf::kExitSolver:
        set_error(res.summary);
        return FPF_ERR_SOLVER;
      case fpf::kExitIo:
        set_error(res.summary);
        return FPF_ERR_IO;
      default:
        set_error(res.summary);
        return FPF_ERR_INTERNAL;
    }
  });
}

}  // extern "C"
