#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "kpde/geometry.hpp"

namespace kpde {

using Index = std::array<long, kMaxDim>;

/// Sites x_i = i h for multi-indices i in an inclusive box [lo, hi].
class UniformGrid {
public:
    UniformGrid(int dim, double h, Index lo, Index hi);

    /// Smallest box whose sites cover [window_lo, window_hi] componentwise,
    /// i.e. every site i h with window_lo <= i h <= window_hi.
    static UniformGrid covering(int dim, double h, const Vec& window_lo, const Vec& window_hi);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] const Index& lo() const noexcept { return lo_; }
    [[nodiscard]] const Index& hi() const noexcept { return hi_; }
    [[nodiscard]] long extent(int d) const noexcept { return hi_[d] - lo_[d] + 1; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    /// Row-major (last axis fastest) flat position of a multi-index inside the box.
    [[nodiscard]] std::size_t flat(const Index& i) const noexcept;
    [[nodiscard]] Index multi(std::size_t flat) const noexcept;
    [[nodiscard]] bool contains(const Index& i) const noexcept;
    [[nodiscard]] Vec point(const Index& i) const noexcept;
    [[nodiscard]] Vec point(std::size_t flat) const noexcept { return point(multi(flat)); }

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

private:
    int dim_;
    double h_;
    Index lo_{};
    Index hi_{};
    std::size_t size_ = 0;
};

/// Coefficients rho_i on a grid; indices outside the box are zero.
struct CoefficientField {
    UniformGrid grid;
    std::vector<double> values;
    double time = 0.0;

    explicit CoefficientField(UniformGrid g, double t = 0.0)
        : grid(g), values(g.size(), 0.0), time(t) {}
    CoefficientField(UniformGrid g, std::vector<double> v, double t = 0.0);

    [[nodiscard]] double at(const Index& i) const noexcept {
        return grid.contains(i) ? values[grid.flat(i)] : 0.0;
    }
};

/// Samples f(x_i) over the whole box.
template <class F>
CoefficientField sample(const UniformGrid& grid, F&& f, double t = 0.0) {
    CoefficientField field(grid, t);
    for (std::size_t k = 0; k < grid.size(); ++k) field.values[k] = f(grid.point(k));
    return field;
}

/// (h^n sum |rho_i|^p)^{1/p}, or sup |rho_i| for p = infinity.
double discrete_norm(const CoefficientField& field, double p);

/// CSV with header `index,x,value`, one row per site (1D only).
void write_csv(std::ostream& out, const CoefficientField& field);

} // namespace kpde
