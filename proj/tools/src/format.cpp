#include "beamspec_cli/format.hpp"

#include <charconv>
#include <cmath>

namespace beamspec::cli {

namespace {

std::string chars(double v, std::chars_format f, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, f, precision);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string fmt17(double v) { return chars(v, std::chars_format::general, 17); }

std::string fmt_sci(double v) { return chars(v, std::chars_format::scientific, 6); }

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace beamspec::cli
