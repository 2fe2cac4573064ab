#include <doctest.h>

#include <cmath>
#include <limits>

#include "kpde/errors.hpp"
#include "kpde/problems.hpp"
#include "kpde/semidiscrete.hpp"

using namespace kpde;

namespace {

double max_diff(const CoefficientField& a, const CoefficientField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

SolverConfig coarse(int nu_h, int nu_eps, KernelSpec k = {4, 4, 1}) {
    SolverConfig c;
    c.h = std::ldexp(1.0, nu_h);
    c.epsilon = std::ldexp(1.0, nu_eps);
    c.kernel = k;
    return c;
}

} // namespace

TEST_CASE("f = 0 gives a zero right-hand side and a frozen state") {
    auto p = burgers_f(SeriesSpec::of(Series::A));
    p.f = [](double, const Vec&, double, const Vec&) { return 0.0; };
    p.f_batch = nullptr;
    const double h = 1.0 / 256, eps = 1.0 / 32;
    const ScaledKernel zeta(make_kernel({4, 4, 1}), eps);
    const auto grid = UniformGrid::covering(1, h, p.window_lo, p.window_hi);
    const auto st = make_stencil(zeta, h);
    const auto state = sample(grid, p.initial);
    for (double v : rhs(0.0, state, p, st).values) CHECK(v == 0.0);
    const auto next = rk4_step(0.0, state, 0.01, p, st);
    CHECK(next.values == state.values);
    CHECK(next.time == doctest::Approx(0.01));
}

TEST_CASE("RK4 on a scalar decay") {
    // one active coefficient: [rho](0) = kappa rho_0 with kappa = h zeta_eps(0)
    const double h = 0.5, eps = 1.0, lambda = 1.5;
    const ScaledKernel zeta(make_kernel({2, 2, 1}), eps);
    const UniformGrid g(1, h, {0, 0, 0}, {0, 0, 0});
    const auto st = make_stencil(zeta, h);
    const double kappa = h * zeta.radial(0.0);
    DefiningFunction p;
    p.f = [lambda](double, const Vec&, double rho, const Vec&) { return lambda * rho; };
    CoefficientField s(g, std::vector<double>{1.0});
    auto local_err = [&](double dt) {
        return std::abs(rk4_step(0.0, s, dt, p, st).values[0] - std::exp(-lambda * kappa * dt));
    };
    const double ratio = local_err(0.2) / local_err(0.1);
    CHECK(std::log2(ratio) == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("Burgers right-hand side approximates the exact time derivative") {
    const auto spec = SeriesSpec::of(Series::A);
    const auto p = burgers_f(spec);
    const double h = std::ldexp(1.0, -12), eps = std::ldexp(1.0, -7);
    const ScaledKernel zeta(make_kernel(spec.scheme_kernel), eps);
    const auto grid = UniformGrid::covering(1, h, p.window_lo, p.window_hi);
    const auto st = make_stencil(zeta, h);
    const auto r = rhs(0.0, sample(grid, p.initial), p, st);
    const auto psi = series_profile(Series::A);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = psi.derivative(grid.point(k)[0]);
        err = std::max(err, std::abs(r.values[k] - d));
        scale = std::max(scale, std::abs(d));
    }
    CHECK(err < 1e-3 * scale);
}

TEST_CASE("transport right-hand side is minus u times the slope") {
    const double u = 1.0;
    const auto psi = series_profile(Series::A);
    const auto p = linear_transport(u, psi, 0.5);
    const double h = std::ldexp(1.0, -12), eps = std::ldexp(1.0, -7);
    const ScaledKernel zeta(make_kernel({4, 4, 1}), eps);
    const auto grid = UniformGrid::covering(1, h, p.window_lo, p.window_hi);
    const auto st = make_stencil(zeta, h);
    const auto r = rhs(0.0, sample(grid, p.initial), p, st);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto g = p.exact_gradient(0.0, grid.point(k));
        err = std::max(err, std::abs(r.values[k] + u * g[0]));
    }
    CHECK(err < 1e-2);
}

TEST_CASE("T = 0 returns the initial samples") {
    const auto p = burgers_f(SeriesSpec::of(Series::B));
    auto c = coarse(-9, -6, {2, 2, 1});
    c.t_final = 0.0;
    const auto r = solve(p, c);
    CHECK(r.step_count == 0);
    CHECK(r.final_state.time == 0.0);
    CHECK(r.final_state.values == sample(r.final_state.grid, p.initial).values);
}

TEST_CASE("final time is hit exactly") {
    const auto p = burgers_f(SeriesSpec::of(Series::A));
    auto c = coarse(-9, -6);
    c.t_final = 0.05;
    c.dt = 0.0013;
    const auto r = solve(p, c);
    CHECK(r.step_count == 39);
    CHECK(r.final_state.time == 0.05);
}

TEST_CASE("snapshots") {
    const auto p = burgers_f(SeriesSpec::of(Series::A));
    auto c = coarse(-9, -6);
    c.t_final = 0.05;
    c.snapshot_times = {0.0, 0.05, 0.02};
    const auto r = solve(p, c);
    REQUIRE(r.snapshots.size() == 3);
    CHECK(r.snapshots[0].time == 0.0);
    CHECK(r.snapshots[1].time >= 0.02);
    CHECK(r.snapshots[2].values == r.final_state.values);
    c.snapshot_times = {0.06};
    CHECK_THROWS_AS((void)solve(p, c), ConfigError);
}

TEST_CASE("invalid configurations") {
    const auto p = burgers_f(SeriesSpec::of(Series::A));
    CHECK_THROWS_AS((void)solve(p, coarse(-6, -6)), ConfigError);
    CHECK_THROWS_AS((void)solve(p, coarse(-5, -6)), ConfigError);
    auto c = coarse(-9, -6);
    c.dt = -1.0;
    CHECK_THROWS_AS((void)solve(p, c), ConfigError);
    CHECK_THROWS_AS((void)solve(p, coarse(-9, -6, {4, 4, 2})), ConfigError);
    CHECK_THROWS_AS((void)solve(p, coarse(-9, -6, {5, 4, 1})), ConfigError);
}

TEST_CASE("blow-up carries the last finite state") {
    auto p = burgers_f(SeriesSpec::of(Series::A));
    p.f = [](double t, const Vec&, double, const Vec&) {
        return t > 0.01 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    p.f_batch = nullptr;
    auto c = coarse(-9, -6);
    c.dt = 0.004;
    try {
        (void)solve(p, c);
        FAIL("expected a blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.step() == 2);
        CHECK(e.time() == doctest::Approx(0.008));
        CHECK(e.last_state().values == sample(e.last_state().grid, p.initial).values);
    }
}

TEST_CASE("single-threaded runs are deterministic and threads do not change results") {
    const auto p = burgers_f(SeriesSpec::of(Series::A));
    auto c = coarse(-10, -6);
    c.t_final = 0.05;
    const auto a = solve(p, c);
    const auto b = solve(p, c);
    CHECK(a.final_state.values == b.final_state.values);
    c.jobs = 3;
    const auto t = solve(p, c);
    double scale = 0.0;
    for (double v : a.final_state.values) scale = std::max(scale, std::abs(v));
    CHECK(max_diff(a.final_state, t.final_state) <= 1e-12 * scale);
}

TEST_CASE("temporal convergence is fourth order") {
    const auto p = burgers_f(SeriesSpec::of(Series::A));
    auto c = coarse(-9, -5);
    c.t_final = 0.1;
    std::vector<CoefficientField> runs;
    // the coarsest stable steps are still pre-asymptotic
    for (double k : {4.0, 8.0, 16.0}) {
        c.dt = 0.1 * c.epsilon / k;
        runs.push_back(solve(p, c).final_state);
    }
    const double d1 = max_diff(runs[0], runs[1]);
    const double d2 = max_diff(runs[1], runs[2]);
    CHECK(std::log2(d1 / d2) == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("batched Burgers source agrees with the pointwise one") {
    for (auto series : {Series::A, Series::B}) {
        auto fast = burgers_f(SeriesSpec::of(series));
        auto slow = fast;
        slow.f_batch = nullptr;
        const double h = 1.0 / 512;
        const ScaledKernel zeta(make_kernel({4, 4, 1}), 1.0 / 32);
        const auto grid = UniformGrid::covering(1, h, fast.window_lo, fast.window_hi);
        const auto st = make_stencil(zeta, h);
        const auto state = sample(grid, fast.initial);
        const auto a = rhs(0.3, state, fast, st);
        const auto b = rhs(0.3, state, slow, st);
        CHECK(max_diff(a, b) < 1e-10);
    }
}
