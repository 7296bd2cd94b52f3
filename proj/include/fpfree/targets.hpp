#pragma once
#include <memory>

#include "fpfree/bodies.hpp"
#include "fpfree/transfer.hpp"

namespace fpf {

struct UnknownTargetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TargetInfo {
  std::string name;    // canonical example, e.g. "lin:l2"
  std::string schema;  // parameter schema, e.g. "lin:<l1|l1.5|l2|l3|sup>"
  std::string kind;    // "map" or "body"
};
std::vector<TargetInfo> list_targets();

//! Body target bundle: the body, the radius schedule its chain follows, the
//! net-hierarchy parameters, and the exterior band experiments sample from.
struct MedinaTarget {
  std::unique_ptr<pou::ConvexBody> body;
  RSchedule schedule = RSchedule::exponential(0.5);
  pou::HierarchyParams params;
  double d_lo = 0.02;
  double d_hi = 0.6;
};

bool is_medina_target(const std::string& name);
MedinaTarget make_medina_target(const std::string& name);

//! Map targets: "lin:<space>", "affine:q=<v>", "thmM4:alpha=<v>[,lambda=<v>]",
//! "hilbert:alpha=<v>[,lambda=<v>]", "linball:alpha=<v>[,lambda=<v>]".
MapHandle make_map_target(const std::string& name);

}  // namespace fpf
