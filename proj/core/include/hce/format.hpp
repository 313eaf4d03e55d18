#pragma once

#include <string>

namespace hce {

/// Shortest decimal text that parses back to the same double.
std::string format_exact(double value);

/// Value rounded to `digits` significant digits ("inf"/"nan" for
/// non-finite values).
std::string format_sig(double value, int digits = 4);

/// Fixed-point text with trailing zeros trimmed.
std::string format_fixed(double value, int decimals);

}  // namespace hce
