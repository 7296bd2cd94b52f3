#include "fpfree/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fpfree/csv.hpp"

namespace fpf {

namespace {

constexpr double kW = 640, kH = 400;
constexpr double kPad = 48;

double fit(double v, double lo, double hi, double a, double b) {
  if (!(hi > lo)) return (a + b) / 2;
  return a + (v - lo) / (hi - lo) * (b - a);
}

std::string num2(double v) {
  // two decimals is plenty for pixel coordinates and keeps files small
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(const std::string& title,
                       const std::vector<SvgSeries>& series) {
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool any = false;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xlo = xhi = s.x[i];
        ylo = yhi = s.y[i];
        any = true;
      } else {
        xlo = std::min(xlo, s.x[i]);
        xhi = std::max(xhi, s.x[i]);
        ylo = std::min(ylo, s.y[i]);
        yhi = std::max(yhi, s.y[i]);
      }
    }
  if (ylo == yhi) yhi = ylo + 1;
  if (xlo == xhi) xhi = xlo + 1;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kW
     << "\" height=\"" << (int)kH << "\" viewBox=\"0 0 " << (int)kW << " "
     << (int)kH << "\">\n";
  os << "<rect width=\"" << (int)kW << "\" height=\"" << (int)kH
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << (int)(kW / 2) << "\" y=\"20\" text-anchor=\"middle\" "
        "font-family=\"monospace\" font-size=\"14\">"
     << title << "</text>\n";
  os << "<rect x=\"" << num2(kPad) << "\" y=\"" << num2(kPad) << "\" width=\""
     << num2(kW - 2 * kPad) << "\" height=\"" << num2(kH - 2 * kPad)
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  // axis range labels
  os << "<text x=\"" << num2(kPad) << "\" y=\"" << num2(kH - kPad + 16)
     << "\" font-family=\"monospace\" font-size=\"10\">" << csv_num(xlo)
     << "</text>\n";
  os << "<text x=\"" << num2(kW - kPad) << "\" y=\"" << num2(kH - kPad + 16)
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
     << csv_num(xhi) << "</text>\n";
  os << "<text x=\"" << num2(kPad - 4) << "\" y=\"" << num2(kH - kPad)
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
     << csv_num(ylo) << "</text>\n";
  os << "<text x=\"" << num2(kPad - 4) << "\" y=\"" << num2(kPad + 4)
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
     << csv_num(yhi) << "</text>\n";

  double legend_y = kPad + 14;
  for (const auto& s : series) {
    std::ostringstream pts;
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double px = fit(s.x[i], xlo, xhi, kPad, kW - kPad);
      const double py = fit(std::clamp(s.y[i], ylo, yhi), ylo, yhi, kH - kPad, kPad);
      if (pts.tellp() > 0) pts << ' ';
      pts << num2(px) << ',' << num2(py);
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    os << "<text x=\"" << num2(kPad + 8) << "\" y=\"" << num2(legend_y)
       << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << s.color
       << "\">" << s.label << "</text>\n";
    legend_y += 14;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fpf
