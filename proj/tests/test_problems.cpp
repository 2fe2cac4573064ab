#include <doctest.h>

#include <cmath>
#include <random>

#include "kpde/errors.hpp"
#include "kpde/problems.hpp"
#include "kpde/quadrature.hpp"

using namespace kpde;

TEST_CASE("series setup") {
    const auto a = SeriesSpec::of(Series::A);
    CHECK(a.scheme_kernel == KernelSpec{4, 4, 1});
    CHECK(a.delta == 0.5);
    CHECK(a.t_final == 0.5);
    CHECK(a.window_lo[0] == -1.25);
    CHECK(a.window_hi[0] == 0.75);
    CHECK(SeriesSpec::of(Series::B).scheme_kernel == KernelSpec{2, 2, 1});
    CHECK(parse_series("b") == Series::B);
    CHECK(series_letter(Series::A) == 'A');
    CHECK_THROWS_AS((void)parse_series("C"), ConfigError);
}

TEST_CASE("profiles have unit mass and compact support") {
    for (Series s : {Series::A, Series::B}) {
        const auto psi = series_profile(s);
        const double mass = quad::panels([&](double x) { return psi.value(x); },
                                         std::vector<double>{-0.5, -0.4, 0.0, 0.4, 0.5});
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(psi.value(0.5) == 0.0);
        CHECK(psi.value(-0.7) == 0.0);
        CHECK(psi.derivative(0.6) == 0.0);
        CHECK(psi.derivative(0.0) == 0.0);
    }
}

TEST_CASE("profile peak values") {
    // series A: (1/delta)(9/16)*3*(-16/9 + 125/36); series B: (1/delta)(3/2)
    CHECK(series_profile(Series::A).value(0.0) == doctest::Approx(183.0 / 32.0).epsilon(1e-14));
    CHECK(series_profile(Series::B).value(0.0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("expanded polynomial agrees with the kernel evaluation") {
    for (Series s : {Series::A, Series::B}) {
        const auto psi = series_profile(s);
        const double d = psi.delta();
        for (double x = -0.55; x <= 0.55; x += 0.0137) {
            const double r = std::abs(x) / d;
            const double slope = psi.shape().eval(r, 1) / (d * d);
            // monomial expansion loses a few digits to cancellation near r = 1
            CHECK(std::abs(psi.value(x) - psi.shape().eval(r) / d) < 1e-11);
            CHECK(std::abs(psi.derivative(x) - (x < 0 ? -slope : slope)) < 1e-10);
        }
    }
}

TEST_CASE("manufactured solution satisfies the equation") {
    for (Series s : {Series::A, Series::B}) {
        const auto p = burgers_f(SeriesSpec::of(s));
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> tt(0.0, 0.5), xx(-1.25, 0.75);
        for (int i = 0; i < 200; ++i) {
            const double t = tt(rng);
            const Vec x{xx(rng), 0, 0};
            const double rho = p.exact_solution(t, x);
            const Vec g = p.exact_gradient(t, x);
            const double dt = g[0]; // d/dt psi(x + t) = psi'(x + t)
            // d_t rho + f(t, x, rho, d_x rho) = 0
            CHECK(std::abs(dt + p.f(t, x, rho, g)) < 1e-12 * (1.0 + std::abs(dt)));
        }
    }
}

TEST_CASE("source vanishes away from the moving bump") {
    const auto p = burgers_f(SeriesSpec::of(Series::A));
    CHECK(p.f(0.2, {0.4, 0, 0}, 0.0, {0.0, 0, 0}) == 0.0);
    CHECK(p.f(0.0, {-1.0, 0, 0}, 0.0, {0.0, 0, 0}) == 0.0);
    CHECK(p.initial({0.1, 0, 0}) == p.exact_solution(0.0, {0.1, 0, 0}));
}

TEST_CASE("linear transport") {
    const auto psi = series_profile(Series::A);
    const auto still = linear_transport(0.0, psi, 0.5);
    CHECK(still.exact_solution(0.3, {-0.25, 0, 0}) == psi.value(0.0));
    const auto moving = linear_transport(1.0, psi, 0.5);
    CHECK(moving.exact_solution(0.5, {0.0, 0, 0}) == doctest::Approx(psi.value(0.0)));
    CHECK(moving.f(0.0, {0, 0, 0}, 1.0, {2.0, 0, 0}) == 2.0);
    CHECK_THROWS_AS((void)linear_transport(3.0, psi, 0.5), ConfigError);
}

TEST_CASE("problem names") {
    CHECK(parse_problem("burgers-a", 0.5).name == "burgers-a");
    CHECK(parse_problem("burgers-b", 0.5).name == "burgers-b");
    CHECK(parse_problem("transport:0.5", 0.5).name == "transport:0.5");
    CHECK_THROWS_AS((void)parse_problem("heat", 0.5), ConfigError);
    CHECK_THROWS_AS((void)parse_problem("transport:x", 0.5), ConfigError);
}
