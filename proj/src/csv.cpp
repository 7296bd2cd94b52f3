#include "fpfree/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fpf {

std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw std::runtime_error("csv_num: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << csv_field(cells[i]);
  }
  os << '\n';
}

}  // namespace fpf
