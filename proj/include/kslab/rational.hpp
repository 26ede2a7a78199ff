#pragma once

#include <boost/rational.hpp>
#include <string>
#include <string_view>

namespace kslab {

// Exact arithmetic for the classical side. Coefficients are tiny (|p|,|q| far
// below 2^32 in every use), so long long never overflows.
using Rat = boost::rational<long long>;

std::string to_string(const Rat& r);          // "p" when integral, else "p/q"
Rat parse_rational(std::string_view text);    // accepts "p" and "p/q"; throws ParseError
double to_double(const Rat& r);

} // namespace kslab
