#pragma once

#include <string>

namespace pfl {

/// Shortest form with at most 6 significant digits ("%.6g").
std::string format_number(double value);

/// `value` rounded to 6 significant digits, for JSON output.
double round_significant(double value);

/// Fixed two-decimal presentation.
std::string format_fixed2(double value);

}  // namespace pfl
