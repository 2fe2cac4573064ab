#pragma once

#include <functional>
#include <vector>

#include "kpde/grid.hpp"
#include "kpde/kernel.hpp"

namespace kpde {

/// Kernel values zeta_eps(m h) and grad zeta_eps(m h) for every offset m with
/// |m h| < eps. Grid-to-grid evaluation only depends on i - j, so one stencil
/// serves every site and every time step.
struct Stencil {
    int dim = 1;
    double h = 0.0;
    double epsilon = 0.0;
    long radius = 0; ///< largest per-axis |m_d|
    std::vector<Index> offsets; ///< lexicographic
    std::vector<double> values0;
    std::vector<Vec> values1;

    /// 1D only: half0[m] = zeta_eps(m h), half1[m] = d/dx zeta_eps(m h), m = 0..radius.
    std::vector<double> half0;
    std::vector<double> half1;
};

Stencil make_stencil(const ScaledKernel& kernel, double h);

/// h^n sum_j rho_j d^alpha zeta_eps(x - x_j).
double evaluate(const CoefficientField& field, const ScaledKernel& kernel, const Vec& x,
                Deriv alpha = Deriv::value());

/// evaluate() at every site of field.grid, through the stencil.
/// `jobs` > 1 splits the sites over threads; results do not depend on it.
CoefficientField evaluate_on_grid(const CoefficientField& field, const Stencil& stencil,
                                  Deriv alpha = Deriv::value(), int jobs = 1);

/// [rho] and all n components of grad [rho] at every site in one sweep.
struct GridEvaluation {
    std::vector<double> value;
    std::vector<std::vector<double>> gradient; ///< gradient[d][site]
};
GridEvaluation evaluate_with_gradient(const CoefficientField& field, const Stencil& stencil,
                                      int jobs = 1);

/// Allocation-free form of evaluate_with_gradient() for the time loop. `values`
/// is laid out on `grid`; `padded` is scratch; value and gradient[d] must be
/// sized to grid.size().
void evaluate_with_gradient_into(const UniformGrid& grid, const std::vector<double>& values,
                                 const Stencil& stencil, std::vector<double>& padded,
                                 std::vector<double>& value,
                                 std::vector<std::vector<double>>& gradient, int jobs = 1);

enum class ErrorMode {
    coefficient,      ///< max_i |rho_i - exact(x_i)|
    quasi_interpolant ///< max_i |d^alpha [rho](x_i) - d^alpha exact(x_i)|
};

/// Discrete L_inf error over the sites of field.grid. In coefficient mode
/// `stencil` and `alpha` are ignored; `exact` must already be d^alpha of the
/// reference in quasi-interpolant mode.
double linf_grid_error(const CoefficientField& field, const Stencil& stencil,
                       const std::function<double(const Vec&)>& exact, ErrorMode mode,
                       Deriv alpha = Deriv::value());

} // namespace kpde
