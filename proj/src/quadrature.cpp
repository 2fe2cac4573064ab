#include "kpde/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace kpde::quad {

double gauss20(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

double panels(const std::function<double(double)>& f, std::span<const double> breaks) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += gauss20(f, breaks[i], breaks[i + 1]);
    return sum;
}

} // namespace kpde::quad
