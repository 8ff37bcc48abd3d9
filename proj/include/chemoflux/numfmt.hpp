#pragma once

#include <string>

namespace chemoflux {

/// Shortest decimal that parses back to exactly the same double
/// ("1.4" stays "1.4"; inf renders as "inf").
std::string format_shortest(double v);

/// Fixed 17-significant-digit form (%.17g), the monitor CSV convention.
std::string format_g17(double v);

/// Strict double parse: the whole token must be consumed; "inf" accepted.
double parse_double(const std::string& token);

} // namespace chemoflux
