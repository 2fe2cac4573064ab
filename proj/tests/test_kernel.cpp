#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "kpde/errors.hpp"
#include "kpde/kernel.hpp"

using namespace kpde;

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("closed-form weights in exact arithmetic") {
    const std::vector<Rational> six{Rational(1), Rational(4, 5), Rational(3, 5)};
    const auto w6 = high_order_weights(std::span<const Rational>(six), 1);
    CHECK(w6[0] == Rational(1));
    CHECK(w6[1] == Rational(-125, 28));
    CHECK(w6[2] == Rational(125, 21));

    const std::vector<Rational> four{Rational(1), Rational(4, 5)};
    const auto w4 = high_order_weights(std::span<const Rational>(four), 1);
    CHECK(w4[0] == Rational(-16, 9));
    CHECK(w4[1] == Rational(125, 36));

    const std::vector<Rational> two{Rational(1)};
    for (int n = 1; n <= 3; ++n) CHECK(high_order_weights(std::span<const Rational>(two), n)[0] == Rational(1));
}

TEST_CASE("floating-point weights match the exact ones") {
    const std::vector<double> nodes{1.0, 0.8, 0.6};
    const auto w = high_order_weights(nodes, 1);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(-125.0 / 28.0).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(125.0 / 21.0).epsilon(1e-14));
}

TEST_CASE("repeated or non-positive nodes") {
    const std::vector<double> rep{1.0, 0.5, 0.5};
    CHECK_THROWS_AS((void)high_order_weights(rep, 1), SingularNodesError);
    const std::vector<double> neg{1.0, -0.5};
    CHECK_THROWS_AS((void)high_order_weights(neg, 1), ConfigError);
    const std::vector<Rational> rrep{Rational(1), Rational(1)};
    CHECK_THROWS_AS((void)high_order_weights(std::span<const Rational>(rrep), 2), SingularNodesError);
}

TEST_CASE("moment conditions for every preset kernel") {
    for (int k : {2, 4, 6})
        for (int s : {2, 4, 6})
            for (int n = 1; n <= 3; ++n) {
                CAPTURE(k);
                CAPTURE(s);
                CAPTURE(n);
                const auto eta = make_kernel({k, s, n});
                CHECK(eta.order() == k);
                CHECK(eta.smoothness() == s);
                CHECK(std::abs(kernel_moment(eta, 0) - 1.0 / sphere_area(n)) < 1e-10);
                for (int i = 1; i < k / 2; ++i) CHECK(std::abs(kernel_moment(eta, i)) < 1e-10);
                // the first non-vanishing moment really is non-zero
                CHECK(std::abs(kernel_moment(eta, k / 2)) > 1e-6);
            }
}

TEST_CASE("the tabulated 125/26 weight violates the second moment") {
    const auto base = WendlandBase::table(1, 2);
    const CompositeRadialKernel wrong(base, 1, {1.0, 0.8}, {-16.0 / 9.0, 125.0 / 26.0});
    CHECK(std::abs(kernel_moment(wrong, 1)) > 1e-3);
    const CompositeRadialKernel right(base, 1, {1.0, 0.8}, {-16.0 / 9.0, 125.0 / 36.0});
    CHECK(std::abs(kernel_moment(right, 1)) < 1e-12);
}

TEST_CASE("order-2 kernel is the base function") {
    const auto eta = make_kernel({2, 2, 1});
    const auto phi = WendlandBase::table(1, 1);
    for (double r : {0.0, 0.2, 0.5, 0.9, 1.2}) CHECK(eta.eval(r) == doctest::Approx(phi.eval(r)));
}

TEST_CASE("eta^{4,6} structure") {
    const auto eta = make_kernel({4, 6, 1});
    const auto phi = WendlandBase::table(1, 3);
    for (double r : {0.0, 0.3, 0.79, 0.85})
        CHECK(eta.eval(r) ==
              doctest::Approx(-16.0 / 9.0 * phi.eval(r) + 125.0 / 36.0 * phi.eval(1.25 * r)).epsilon(1e-13));
}

TEST_CASE("unsupported kernel requests") {
    CHECK_THROWS_AS((void)make_kernel({8, 4, 1}), ConfigError);
    CHECK_THROWS_AS((void)make_kernel({4, 3, 1}), ConfigError);
    CHECK_THROWS_AS((void)make_kernel({4, 4, 4}), ConfigError);
    CHECK_THROWS_AS(CompositeRadialKernel(WendlandBase::table(1, 1), 1, {0.9}, {1.0}), ConfigError);
    CHECK_THROWS_AS(CompositeRadialKernel(WendlandBase::table(1, 1), 1, {1.0, 1.0}, {1.0, 1.0}), SingularNodesError);
}

TEST_CASE("kernel spec strings") {
    CHECK(parse_kernel_spec("composite:4:4:1").order() == 4);
    CHECK(parse_kernel_spec("composite:6:2:3").dim() == 3);
    const auto w = parse_kernel_spec("wendland:2:1");
    CHECK(w.order() == 2);
    CHECK(w.smoothness() == 2);
    CHECK_THROWS_AS((void)parse_kernel_spec("gauss:1"), ConfigError);
    CHECK_THROWS_AS((void)parse_kernel_spec("composite:4:4"), ConfigError);
    CHECK_THROWS_AS((void)parse_kernel_spec("composite:a:4:1"), ConfigError);
}

TEST_CASE("piecewise polynomial form splices smoothly") {
    const auto eta = make_kernel({4, 4, 1});
    const auto pieces = eta.pieces();
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].hi == doctest::Approx(0.8));
    auto poly = [](const std::vector<double>& c, double r, int m) {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(m);) {
            double f = 1.0;
            for (int j = 0; j < m; ++j) f *= static_cast<double>(i - j);
            v = v * r + c[i] * f;
        }
        return v;
    };
    for (int m = 0; m <= 1; ++m) {
        const double left = poly(pieces[0].coeffs, 0.8, m);
        const double right = poly(pieces[1].coeffs, 0.8, m);
        CHECK(std::abs(left - right) < 1e-12);
        CHECK(std::abs(left - eta.eval(0.8, m)) < 1e-12);
    }
    // and the outer piece vanishes with its derivative at r = 1
    CHECK(std::abs(poly(pieces[1].coeffs, 1.0, 0)) < 1e-12);
    CHECK(std::abs(poly(pieces[1].coeffs, 1.0, 1)) < 1e-12);
}

TEST_CASE("scaled kernel values and gradient") {
    const double eps = 0.25;
    const ScaledKernel zeta(make_kernel({4, 4, 1}), eps);
    CHECK(zeta.value({0.0, 0, 0}) == doctest::Approx(zeta.kernel().eval(0.0) / eps));
    CHECK(zeta.value({0.25, 0, 0}) == 0.0);
    CHECK(zeta.value({-0.3, 0, 0}) == 0.0);
    const Vec g0 = zeta.gradient({0.0, 0, 0});
    CHECK(g0[0] == 0.0);

    const ScaledKernel z3(make_kernel({4, 4, 3}), 0.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int s = 0; s < 1000; ++s) {
        const Vec x{u(rng), u(rng), u(rng)};
        const Vec mx{-x[0], -x[1], -x[2]};
        CHECK(z3.value(x) == z3.value(mx));
        const Vec g = z3.gradient(x), gm = z3.gradient(mx);
        for (int d = 0; d < 3; ++d) CHECK(g[d] == -gm[d]);
    }
}

TEST_CASE("gradient of a C^0 kernel is rejected") {
    const ScaledKernel z(parse_kernel_spec("wendland:1:0"), 0.5);
    CHECK_THROWS_AS((void)z.gradient({0.1, 0, 0}), SmoothnessError);
}

TEST_CASE("L_p scaling law") {
    const auto eta = make_kernel({4, 4, 1});
    const ScaledKernel unit(eta, 1.0);
    for (int alpha = 0; alpha <= 1; ++alpha)
        for (double p : {1.0, 2.0, kInf}) {
            const double base = lp_norm(unit, alpha, p);
            for (double eps : {0.5, 0.25}) {
                const double predicted = std::pow(eps, -(1.0 - 1.0 / p) - alpha) * base;
                CHECK(lp_norm(ScaledKernel(eta, eps), alpha, p) / predicted == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
}
