#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>

namespace dirac8::csv {

/// Fixed "%.17g" rendering, independent of the global locale.
std::string format_double(double value);

/// Writes one comma-separated row terminated by '\n'.
void write_row(std::ostream& out, std::span<const double> values);
void write_row(std::ostream& out, std::initializer_list<double> values);

/// Writes "# text\n".
void write_comment(std::ostream& out, const std::string& text);

}  // namespace dirac8::csv
