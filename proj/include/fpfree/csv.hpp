#pragma once
#include <ostream>
#include <string>
#include <vector>

namespace fpf {

//! 17-significant-digit decimal for a double (enough to round-trip), locale
//! independent.  Every run of an experiment must produce byte-identical files,
//! so all numeric output in this project is routed through here.
std::string csv_num(double v);

std::string csv_field(const std::string& raw);  // RFC-4180 quoting

void csv_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace fpf
