#pragma once

// Locale-independent number formatting for text artifacts.

#include <string>

namespace goalnet {

// Shortest decimal form that round-trips to the same double.
std::string fmt_real(double v);

// Fixed notation with `decimals` digits after the point; "-0.000" prints as
// "0.000".
std::string fmt_fixed(double v, int decimals);

}  // namespace goalnet
