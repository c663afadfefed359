#include "dirac8/csv.hpp"

#include <cstdio>

namespace dirac8::csv {

std::string format_double(double value) {
  // snprintf's %g honours LC_NUMERIC; the CLI never calls setlocale, so the
  // "C" locale (and '.') is in effect.
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_row(std::ostream& out, std::span<const double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_row(out, std::span<const double>(values.begin(), values.size()));
}

void write_comment(std::ostream& out, const std::string& text) { out << "# " << text << '\n'; }

}  // namespace dirac8::csv
