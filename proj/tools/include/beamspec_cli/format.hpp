#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beamspec::cli {

/// Shortest-independent fixed form: 17 significant digits, '.' separator.
std::string fmt17(double v);

/// Compact form for tables: %.6e-style via to_chars scientific, 7 digits.
std::string fmt_sci(double v);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace beamspec::cli
