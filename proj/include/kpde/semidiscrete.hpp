#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kpde/errors.hpp"
#include "kpde/grid.hpp"
#include "kpde/kernel.hpp"
#include "kpde/quasi_interp.hpp"

namespace kpde {

/// Right-hand side of d/dt rho + f(t, x, rho, grad rho) = 0 together with
/// initial data, the computational window and optional exact solution.
struct DefiningFunction {
    using Rhs = std::function<double(double t, const Vec& x, double rho, const Vec& grad)>;
    using Field = std::function<double(double t, const Vec& x)>;
    using GradField = std::function<Vec(double t, const Vec& x)>;
    /// out[k] = f(t, (i0 + k) h, rho[k], grad[k]) for k < n; one-dimensional problems only.
    using Batch1D = std::function<void(double t, long i0, double h, const double* rho, const double* grad,
                                       double* out, std::size_t n)>;

    std::string name;
    int dim = 1;
    Rhs f;
    Batch1D f_batch; ///< optional fast path, must agree with f
    std::function<double(const Vec&)> initial;
    Field exact_solution;   ///< empty if unknown
    GradField exact_gradient; ///< empty if unknown
    Vec window_lo{};
    Vec window_hi{};
};

struct SolverConfig {
    double h = 0.0;
    double epsilon = 0.0;
    KernelSpec kernel{4, 4, 1};
    double t_final = 0.5;
    /// Explicit step. When unset the step is cfl * epsilon.
    std::optional<double> dt;
    double cfl = 0.1;
    /// Worker threads for the stencil sweeps; 1 is the deterministic reference mode.
    int jobs = 1;
    /// Times at which to keep a copy of the state (each must lie in [0, t_final]).
    std::vector<double> snapshot_times;

    /// Step actually used (before shortening the last one).
    [[nodiscard]] double step() const { return dt ? *dt : cfl * epsilon; }
    /// Throws ConfigError unless 0 < h < epsilon, step > 0 and t_final >= 0.
    void validate() const;
};

struct SolveResult {
    CoefficientField final_state;
    std::size_t step_count = 0;
    double wall_time = 0.0; ///< seconds
    std::vector<CoefficientField> snapshots;
};

/// A coefficient became non-finite. Carries the last finite state.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, CoefficientField last_state, std::size_t step)
        : Error(what), last_state_(std::move(last_state)), step_(step) {}

    [[nodiscard]] const CoefficientField& last_state() const noexcept { return last_state_; }
    [[nodiscard]] double time() const noexcept { return last_state_.time; }
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    CoefficientField last_state_;
    std::size_t step_;
};

/// The ODE system on one grid with preallocated work buffers. One instance per
/// solve; not shareable between threads.
class SemiDiscreteSystem {
public:
    SemiDiscreteSystem(const DefiningFunction& problem, const Stencil& stencil, UniformGrid grid,
                       int jobs = 1);

    [[nodiscard]] const UniformGrid& grid() const noexcept { return grid_; }

    /// out_i = -f(t, x_i, [state]_{x_i}, grad [state]_{x_i}); throws BlowUpError
    /// (without a usable last state) on a non-finite entry.
    void rhs(double t, const std::vector<double>& state, std::vector<double>& out);
    /// Classical RK4 update of `state` in place.
    void rk4_step(double t, double dt, std::vector<double>& state);

private:
    const DefiningFunction& problem_;
    const Stencil& stencil_;
    UniformGrid grid_;
    int jobs_;
    std::vector<double> padded_;
    std::vector<double> value_;
    std::vector<std::vector<double>> grad_;
    std::vector<double> k1_, k2_, k3_, k4_, stage_;
};

/// d/dt rho_i = -f(t, x_i, [rho]_{x_i}, grad [rho]_{x_i}). Throws BlowUpError on
/// a non-finite entry.
CoefficientField rhs(double t, const CoefficientField& state, const DefiningFunction& problem,
                     const Stencil& stencil, int jobs = 1);

/// One classical four-stage Runge-Kutta step; all stages share the stencil.
CoefficientField rk4_step(double t, const CoefficientField& state, double dt,
                          const DefiningFunction& problem, const Stencil& stencil, int jobs = 1);

/// rho_i(0) = rho_0(x_i) on the window grid, integrated to t_final. The last
/// step is shortened so the final time is exactly t_final.
SolveResult solve(const DefiningFunction& problem, const SolverConfig& config);

} // namespace kpde
