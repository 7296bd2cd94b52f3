#include "fpfree/targets.hpp"

#include <map>
#include <sstream>

namespace fpf {

namespace {

std::pair<std::string, std::string> split_family(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= name.size())
    throw UnknownTargetError("target '" + name + "' is not of the form family:rest");
  return {name.substr(0, colon), name.substr(colon + 1)};
}

std::map<std::string, double> parse_params(const std::string& rest,
                                           const std::string& name) {
  std::map<std::string, double> out;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw UnknownTargetError("target '" + name + "': expected key=value, got '" +
                               item + "'");
    const std::string key = item.substr(0, eq);
    try {
      size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing junk");
      out[key] = v;
    } catch (const std::exception&) {
      throw UnknownTargetError("target '" + name + "': bad numeric value in '" + item +
                               "'");
    }
  }
  return out;
}

double take_param(std::map<std::string, double>& params, const std::string& key,
                  double fallback, bool required, const std::string& name) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (required) throw UnknownTargetError("target '" + name + "': missing " + key);
    return fallback;
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, double>& params,
                      const std::string& name) {
  if (!params.empty())
    throw UnknownTargetError("target '" + name + "': unknown parameter '" +
                             params.begin()->first + "'");
}

SpaceSpec parse_space(const std::string& tok, const std::string& name) {
  if (tok == "sup") return SpaceSpec::sup();
  if (tok.size() >= 2 && tok[0] == 'l') {
    try {
      size_t used = 0;
      const double p = std::stod(tok.substr(1), &used);
      if (used == tok.size() - 1 && p >= 1.0) return SpaceSpec::lp(p);
    } catch (const std::exception&) {
    }
  }
  throw UnknownTargetError("target '" + name + "': unknown space '" + tok + "'");
}

}  // namespace

std::vector<TargetInfo> list_targets() {
  return {
      {"lin:l2", "lin:<l1|l1.5|l2|l3|...|sup>", "map"},
      {"affine:q=0.5", "affine:q=<0<q<1>", "map"},
      {"thmM4:alpha=0.5", "thmM4:alpha=<0<a<1>[,lambda=<v>]", "map"},
      {"hilbert:alpha=0.5", "hilbert:alpha=<0<a<1>[,lambda=<v>]", "map"},
      {"linball:alpha=0.5", "linball:alpha=<0<a<1>[,lambda=<v>]", "map"},
      {"medina:segment2d", "medina:<segment2d|thinbox2d|thinbox2dexp|simplex3d|flat4d>",
       "body"},
  };
}

bool is_medina_target(const std::string& name) {
  return name.rfind("medina:", 0) == 0;
}

MedinaTarget make_medina_target(const std::string& name) {
  const auto [family, rest] = split_family(name);
  if (family != "medina")
    throw UnknownTargetError("'" + name + "' is not a body target");
  MedinaTarget t;
  try {
    t.body = pou::make_body(rest);
  } catch (const std::invalid_argument& e) {
    throw UnknownTargetError(e.what());
  }
  if (rest == "segment2d" || rest == "thinbox2d") {
    t.schedule = RSchedule::holder(0.5);
    t.params = {-3, 8, 8.0, 8};
    t.d_lo = 0.02;
    t.d_hi = 0.6;
  } else if (rest == "thinbox2dexp") {
    t.schedule = RSchedule::exponential(0.5);
    t.params = {-3, 5, 8.0, 8};
    t.d_lo = 0.05;
    t.d_hi = 0.6;
  } else if (rest == "simplex3d") {
    t.schedule = RSchedule::exponential(0.5);
    t.params = {-3, 5, 8.0, 3};
    t.d_lo = 0.1;
    t.d_hi = 0.6;
  } else if (rest == "flat4d") {
    t.schedule = RSchedule::exponential(0.5);
    t.params = {-3, 5, 8.0, 2};
    t.d_lo = 0.1;
    t.d_hi = 0.6;
  }
  return t;
}

MapHandle make_map_target(const std::string& name) {
  const auto [family, rest] = split_family(name);
  if (family == "lin") return make_lin_handle(parse_space(rest, name));
  if (family == "affine") {
    auto params = parse_params(rest, name);
    const double q = take_param(params, "q", 0.5, true, name);
    reject_leftovers(params, name);
    if (!(q > 0.0 && q < 1.0))
      throw UnknownTargetError("target '" + name + "': q must lie in (0,1)");
    return make_affine_handle(q);
  }
  if (family == "thmM4" || family == "hilbert" || family == "linball") {
    auto params = parse_params(rest, name);
    const double alpha = take_param(params, "alpha", 0.5, true, name);
    const double lambda = take_param(params, "lambda", 1.0, false, name);
    reject_leftovers(params, name);
    if (!(alpha > 0.0 && alpha < 1.0))
      throw UnknownTargetError("target '" + name + "': alpha must lie in (0,1)");
    const HolderSource src = family == "thmM4"     ? HolderSource::ThmM4
                             : family == "hilbert" ? HolderSource::Hilbert
                                                   : HolderSource::LinBall;
    return build_holder_free_map(alpha, lambda, src);
  }
  throw UnknownTargetError("unknown target family '" + family + "'");
}

}  // namespace fpf
