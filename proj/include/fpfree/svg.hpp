#pragma once
#include <string>
#include <vector>

namespace fpf {

//! One polyline on the plot; y values are clipped to the frame.
struct SvgSeries {
  std::string label;
  std::string color;  // css color
  std::vector<double> x;
  std::vector<double> y;
};

//! Deterministic log-free scatter/line plot, 640x400.  Output depends only on
//! the inputs — no timestamps, no randomized ids — so reruns are identical.
std::string render_svg(const std::string& title, const std::vector<SvgSeries>& series);

}  // namespace fpf
