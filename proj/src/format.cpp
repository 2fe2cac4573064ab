#include "kpde/format.hpp"

#include <array>
#include <charconv>

#include "kpde/errors.hpp"

namespace kpde {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), ptr};
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("not a number: '" + std::string(text) + "'");
    return v;
}

} // namespace kpde
