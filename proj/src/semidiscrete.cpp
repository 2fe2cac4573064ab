#include "kpde/semidiscrete.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>

#include "kpde/parallel.hpp"

namespace kpde {

void SolverConfig::validate() const {
    if (!(h > 0.0) || !(epsilon > 0.0)) throw ConfigError("h and epsilon must be positive");
    if (!(h < epsilon)) throw ConfigError("the scheme needs h < epsilon");
    if (!(step() > 0.0)) throw ConfigError("time step must be positive");
    if (!(t_final >= 0.0)) throw ConfigError("final time must be non-negative");
    for (double t : snapshot_times)
        if (t < 0.0 || t > t_final) throw ConfigError("snapshot time outside [0, t_final]");
    if (kernel.order < 1) throw ConfigError("bad kernel spec");
}

SemiDiscreteSystem::SemiDiscreteSystem(const DefiningFunction& problem, const Stencil& stencil,
                                       UniformGrid grid, int jobs)
    : problem_(problem), stencil_(stencil), grid_(grid), jobs_(jobs) {
    if (grid_.dim() != stencil_.dim || grid_.spacing() != stencil_.h)
        throw ConfigError("stencil was built for a different grid (h or dimension mismatch)");
    const std::size_t n = grid_.size();
    value_.assign(n, 0.0);
    grad_.assign(grid_.dim(), std::vector<double>(n, 0.0));
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &stage_}) v->assign(n, 0.0);
}

void SemiDiscreteSystem::rhs(double t, const std::vector<double>& state, std::vector<double>& out) {
    evaluate_with_gradient_into(grid_, state, stencil_, padded_, value_, grad_, jobs_);
    const int n = grid_.dim();
    out.resize(state.size());
    std::atomic<bool> finite = true;
    parallel_for(state.size(), jobs_, [&](std::size_t b, std::size_t e) {
        if (problem_.f_batch && n == 1) {
            const long i0 = grid_.lo()[0] + static_cast<long>(b);
            problem_.f_batch(t, i0, grid_.spacing(), value_.data() + b, grad_[0].data() + b, out.data() + b, e - b);
        } else {
            for (std::size_t k = b; k < e; ++k) {
                Vec g{};
                for (int d = 0; d < n; ++d) g[d] = grad_[d][k];
                out[k] = problem_.f(t, grid_.point(k), value_[k], g);
            }
        }
        bool ok = true;
        for (std::size_t k = b; k < e; ++k) {
            out[k] = -out[k];
            ok = ok && std::isfinite(out[k]);
        }
        if (!ok) finite = false;
    });
    if (finite) return;
    const auto bad = std::find_if(out.begin(), out.end(), [](double v) { return !std::isfinite(v); });
    std::ostringstream msg;
    msg << "non-finite right-hand side at t=" << t << " (site " << grid_.multi(bad - out.begin())[0] << ")";
    throw BlowUpError(msg.str(), CoefficientField(grid_, state, t), 0);
}

void SemiDiscreteSystem::rk4_step(double t, double dt, std::vector<double>& state) {
    const std::size_t n = state.size();
    auto shift = [&](const std::vector<double>& k, double c) {
        for (std::size_t i = 0; i < n; ++i) stage_[i] = state[i] + c * k[i];
    };
    rhs(t, state, k1_);
    shift(k1_, 0.5 * dt);
    rhs(t + 0.5 * dt, stage_, k2_);
    shift(k2_, 0.5 * dt);
    rhs(t + 0.5 * dt, stage_, k3_);
    shift(k3_, dt);
    rhs(t + dt, stage_, k4_);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        state[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
}

CoefficientField rhs(double t, const CoefficientField& state, const DefiningFunction& problem,
                     const Stencil& stencil, int jobs) {
    SemiDiscreteSystem system(problem, stencil, state.grid, jobs);
    CoefficientField out(state.grid, t);
    system.rhs(t, state.values, out.values);
    return out;
}

CoefficientField rk4_step(double t, const CoefficientField& state, double dt,
                          const DefiningFunction& problem, const Stencil& stencil, int jobs) {
    SemiDiscreteSystem system(problem, stencil, state.grid, jobs);
    CoefficientField next(state.grid, state.values, t + dt);
    system.rk4_step(t, dt, next.values);
    return next;
}

SolveResult solve(const DefiningFunction& problem, const SolverConfig& config) {
    config.validate();
    if (config.kernel.dim != problem.dim) throw ConfigError("kernel and problem dimensions differ");
    const auto start = std::chrono::steady_clock::now();

    const ScaledKernel kernel(make_kernel(config.kernel), config.epsilon);
    const auto grid = UniformGrid::covering(problem.dim, config.h, problem.window_lo, problem.window_hi);
    const auto stencil = make_stencil(kernel, config.h);

    SemiDiscreteSystem system(problem, stencil, grid, config.jobs);
    CoefficientField state = sample(grid, problem.initial, 0.0);
    std::vector<double> pending = config.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::vector<CoefficientField> snapshots;
    auto take_snapshots = [&](double upto) {
        while (!pending.empty() && pending.front() <= upto) {
            // snapshots are taken at the first step reaching the requested time
            snapshots.push_back(state);
            pending.erase(pending.begin());
        }
    };
    take_snapshots(0.0);

    const double T = config.t_final;
    const double dt = config.step();
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    std::size_t done = 0;
    std::vector<double> next;
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * dt;
        const bool last = s + 1 == steps;
        const double step = last ? T - t : dt;
        next.assign(state.values.begin(), state.values.end());
        try {
            system.rk4_step(t, step, next);
        } catch (const BlowUpError& e) {
            throw BlowUpError(std::string(e.what()) + " during step " + std::to_string(s + 1), state, s);
        }
        for (double v : next) {
            if (!std::isfinite(v)) {
                throw BlowUpError("non-finite coefficient after step " + std::to_string(s + 1) +
                                      " (t=" + std::to_string(t + step) + ")",
                                  state, s);
            }
        }
        state.values.swap(next);
        state.time = last ? T : static_cast<double>(s + 1) * dt;
        ++done;
        take_snapshots(state.time);
    }
    state.time = T;

    SolveResult result{std::move(state), done, 0.0, std::move(snapshots)};
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace kpde
