#pragma once

#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

namespace kpde {

using Rational = boost::rational<std::int64_t>;

/// Compactly supported Wendland function
///
///     phi(r) = c * (1 - r)_+^l * p(r),   r >= 0,
///
/// of minimal degree with C^{2k} smoothness as a radial function on R^n.
/// The constant c is stored exactly so that both the n-dimensional
/// normalization and ad-hoc renormalizations (e.g. unit 1D mass) are
/// representable.
class WendlandBase {
public:
    /// Table entry for dimension n in {1,2,3} and smoothness index k in {0,..,3}.
    static WendlandBase table(int dim, int smoothness_index);

    /// Same shape, different leading constant.
    [[nodiscard]] WendlandBase with_constant(Rational constant) const;

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int smoothness_index() const noexcept { return k_; }
    /// Highest derivative order for which eval() is defined (2k).
    [[nodiscard]] int max_derivative() const noexcept { return 2 * k_; }
    /// Rational part of the leading constant; the full constant is
    /// constant() / pi when constant_over_pi() (n = 2, 3 table entries).
    [[nodiscard]] Rational constant() const noexcept { return constant_; }
    [[nodiscard]] bool constant_over_pi() const noexcept { return over_pi_; }
    [[nodiscard]] double constant_value() const noexcept { return c_; }
    [[nodiscard]] int support_exponent() const noexcept { return exponent_; }
    /// Coefficients of p in increasing powers of r.
    [[nodiscard]] const std::vector<Rational>& polynomial() const noexcept { return poly_; }
    /// Polynomial degree of the piece on [0, 1).
    [[nodiscard]] int degree() const noexcept {
        return exponent_ + static_cast<int>(poly_.size()) - 1;
    }

    /// d^m/dr^m phi(r) for r >= 0. Exactly zero for r >= 1.
    /// Throws SmoothnessError if m > 2k.
    [[nodiscard]] double eval(double r, int m = 0) const;

    /// Coefficients (increasing powers) of constant() * (1 - r)^l p(r) on [0, 1),
    /// without the 1/pi factor.
    [[nodiscard]] std::vector<Rational> expanded() const;

private:
    WendlandBase(int dim, int k, Rational c, int exponent, std::vector<Rational> poly);

    int dim_;
    int k_;
    Rational constant_;
    bool over_pi_ = false;
    int exponent_;
    std::vector<Rational> poly_;
    // double copies for evaluation
    double c_;
    std::vector<double> p_;
};

} // namespace kpde
