#pragma once

#include <functional>
#include <span>

namespace kpde::quad {

/// 20-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 39.
double gauss20(const std::function<double(double)>& f, double a, double b);

/// Gauss-Legendre on each panel between consecutive sorted breakpoints.
double panels(const std::function<double(double)>& f, std::span<const double> breaks);

} // namespace kpde::quad
