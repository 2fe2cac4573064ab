#pragma once

#include <string>
#include <string_view>

namespace kpde {

/// Shortest decimal that round-trips to the same double; '.' separator, no locale.
std::string format_double(double v);

/// Strict locale-independent parse; throws ConfigError on trailing garbage.
double parse_double(std::string_view text);

} // namespace kpde
