#include "chemoflux/numfmt.hpp"

#include "chemoflux/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace chemoflux {

std::string format_shortest(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& token) {
    if (token == "inf" || token == "infinity" || token == "+inf")
        return std::numeric_limits<double>::infinity();
    if (token == "-inf" || token == "-infinity")
        return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("not a number: '" + token + "'");
    return v;
}

} // namespace chemoflux
