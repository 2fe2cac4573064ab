#include "kpde/grid.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "kpde/errors.hpp"
#include "kpde/format.hpp"

namespace kpde {

UniformGrid::UniformGrid(int dim, double h, Index lo, Index hi) : dim_(dim), h_(h), lo_(lo), hi_(hi) {
    if (dim < 1 || dim > kMaxDim) throw ConfigError("grid dimension must be 1, 2 or 3");
    if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
    size_ = 1;
    for (int d = 0; d < dim_; ++d) {
        if (hi_[d] < lo_[d]) throw ConfigError("empty grid index box");
        size_ *= static_cast<std::size_t>(hi_[d] - lo_[d] + 1);
    }
    for (int d = dim_; d < kMaxDim; ++d) lo_[d] = hi_[d] = 0;
}

UniformGrid UniformGrid::covering(int dim, double h, const Vec& window_lo, const Vec& window_hi) {
    Index lo{}, hi{};
    for (int d = 0; d < dim; ++d) {
        lo[d] = static_cast<long>(std::ceil(window_lo[d] / h));
        hi[d] = static_cast<long>(std::floor(window_hi[d] / h));
    }
    return {dim, h, lo, hi};
}

std::size_t UniformGrid::flat(const Index& i) const noexcept {
    std::size_t k = 0;
    for (int d = 0; d < dim_; ++d)
        k = k * static_cast<std::size_t>(extent(d)) + static_cast<std::size_t>(i[d] - lo_[d]);
    return k;
}

Index UniformGrid::multi(std::size_t flat) const noexcept {
    Index i{};
    for (int d = dim_ - 1; d >= 0; --d) {
        const auto e = static_cast<std::size_t>(extent(d));
        i[d] = lo_[d] + static_cast<long>(flat % e);
        flat /= e;
    }
    return i;
}

bool UniformGrid::contains(const Index& i) const noexcept {
    for (int d = 0; d < dim_; ++d)
        if (i[d] < lo_[d] || i[d] > hi_[d]) return false;
    return true;
}

Vec UniformGrid::point(const Index& i) const noexcept {
    Vec x{};
    for (int d = 0; d < dim_; ++d) x[d] = static_cast<double>(i[d]) * h_;
    return x;
}

CoefficientField::CoefficientField(UniformGrid g, std::vector<double> v, double t)
    : grid(g), values(std::move(v)), time(t) {
    if (values.size() != grid.size()) throw ConfigError("field size does not match its grid");
}

double discrete_norm(const CoefficientField& field, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : field.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw ConfigError("discrete norm needs p >= 1");
    double s = 0.0;
    for (double v : field.values) s += std::pow(std::abs(v), p);
    const double hn = std::pow(field.grid.spacing(), field.grid.dim());
    return std::pow(hn * s, 1.0 / p);
}

void write_csv(std::ostream& out, const CoefficientField& field) {
    if (field.grid.dim() != 1) throw ConfigError("field CSV output is one-dimensional only");
    out << "index,x,value\n";
    for (std::size_t k = 0; k < field.grid.size(); ++k) {
        const long i = field.grid.multi(k)[0];
        out << i << ',' << format_double(field.grid.point(k)[0]) << ','
            << format_double(field.values[k]) << '\n';
    }
}

} // namespace kpde
