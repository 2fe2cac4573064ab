#pragma once

#include <array>
#include <cmath>

namespace kpde {

inline constexpr int kMaxDim = 3;

/// Point or vector in R^n, n <= 3; trailing components unused.
using Vec = std::array<double, kMaxDim>;

inline double norm(const Vec& x, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += x[d] * x[d];
    return std::sqrt(s);
}

/// Spatial derivative selector for |alpha| <= 1: the value itself or d/dx_axis.
struct Deriv {
    int axis = -1;

    static constexpr Deriv value() { return {}; }
    static constexpr Deriv partial(int axis) { return {axis}; }
    [[nodiscard]] constexpr int order() const { return axis < 0 ? 0 : 1; }
    friend constexpr bool operator==(Deriv, Deriv) = default;
};

/// Surface area omega_{n-1} of the unit sphere S^{n-1} in R^n.
inline double sphere_area(int dim) {
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: return 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0);
    }
}

} // namespace kpde
