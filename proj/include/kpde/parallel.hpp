#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kpde {

/// Calls body(begin, end) on `jobs` contiguous chunks of [0, n). jobs <= 1 runs inline.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || n < 2 * workers) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
}

} // namespace kpde
