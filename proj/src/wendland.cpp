#include "kpde/wendland.hpp"

#include <cmath>
#include <string>

#include "kpde/errors.hpp"

namespace kpde {

namespace {

// The pi in the n = 2, 3 constants is carried separately: c = q / pi.
struct TableEntry {
    Rational constant;
    bool over_pi;
    int exponent;
    std::vector<Rational> poly;
};

TableEntry lookup(int dim, int k) {
    using R = Rational;
    switch (dim) {
    case 1:
        switch (k) {
        case 0: return {R(1), false, 1, {R(1)}};
        case 1: return {R(5, 4), false, 3, {R(1), R(3)}};
        case 2: return {R(3, 2), false, 5, {R(1), R(5), R(8)}};
        case 3: return {R(55, 32), false, 7, {R(1), R(7), R(19), R(21)}};
        }
        break;
    case 2:
        switch (k) {
        case 0: return {R(6), true, 2, {R(1)}};
        case 1: return {R(7), true, 4, {R(1), R(4)}};
        case 2: return {R(3), true, 6, {R(3), R(18), R(35)}};
        case 3: return {R(78, 7), true, 8, {R(1), R(8), R(25), R(32)}};
        }
        break;
    case 3:
        switch (k) {
        case 0: return {R(15, 2), true, 2, {R(1)}};
        case 1: return {R(21, 2), true, 4, {R(1), R(4)}};
        case 2: return {R(165, 32), true, 6, {R(3), R(18), R(35)}};
        case 3: return {R(1365, 64), true, 8, {R(1), R(8), R(25), R(32)}};
        }
        break;
    }
    throw ConfigError("no Wendland function for n=" + std::to_string(dim) +
                      ", k=" + std::to_string(k) + " (supported: n in 1..3, k in 0..3)");
}

double to_double(Rational q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// falling factorial l (l-1) ... (l-j+1)
double falling(int l, int j) {
    double v = 1.0;
    for (int i = 0; i < j; ++i) v *= static_cast<double>(l - i);
    return v;
}

double binomial(int n, int j) {
    return falling(n, j) / falling(j, j);
}

// j-th derivative of sum c_i r^i by Horner.
double poly_derivative(const std::vector<double>& c, double r, int j) {
    const int deg = static_cast<int>(c.size()) - 1;
    if (j > deg) return 0.0;
    double acc = 0.0;
    for (int i = deg; i >= j; --i) acc = acc * r + c[i] * falling(i, j);
    return acc;
}

} // namespace

WendlandBase WendlandBase::table(int dim, int smoothness_index) {
    TableEntry e = lookup(dim, smoothness_index);
    WendlandBase w(dim, smoothness_index, e.constant, e.exponent, std::move(e.poly));
    if (e.over_pi) {
        w.over_pi_ = true;
        w.c_ /= M_PI;
    }
    return w;
}

WendlandBase::WendlandBase(int dim, int k, Rational c, int exponent, std::vector<Rational> poly)
    : dim_(dim), k_(k), constant_(c), exponent_(exponent), poly_(std::move(poly)),
      c_(to_double(c)) {
    p_.reserve(poly_.size());
    for (const auto& q : poly_) p_.push_back(to_double(q));
}

WendlandBase WendlandBase::with_constant(Rational constant) const {
    return WendlandBase(dim_, k_, constant, exponent_, poly_);
}

double WendlandBase::eval(double r, int m) const {
    if (m < 0 || m > max_derivative()) {
        throw SmoothnessError("derivative order " + std::to_string(m) +
                              " exceeds smoothness C^" + std::to_string(max_derivative()) +
                              " of the Wendland function");
    }
    if (r >= 1.0) return 0.0;
    const double s = 1.0 - r;
    if (m <= 1) {
        // hot path for the solver: value and first derivative by repeated multiplication
        double sl1 = 1.0;
        for (int i = 1; i < exponent_; ++i) sl1 *= s;
        double p = 0.0, dp = 0.0;
        for (auto it = p_.rbegin(); it != p_.rend(); ++it) {
            dp = dp * r + p;
            p = p * r + *it;
        }
        if (m == 0) return c_ * sl1 * s * p;
        return c_ * sl1 * (s * dp - static_cast<double>(exponent_) * p);
    }
    // Leibniz rule on (1 - r)^l * p(r)
    double acc = 0.0;
    for (int j = 0; j <= m && j <= exponent_; ++j) {
        const double dj = ((j % 2) ? -1.0 : 1.0) * falling(exponent_, j) *
                          std::pow(s, exponent_ - j);
        acc += binomial(m, j) * dj * poly_derivative(p_, r, m - j);
    }
    return c_ * acc;
}

std::vector<Rational> WendlandBase::expanded() const {
    // (1 - r)^l by repeated multiplication
    std::vector<Rational> b{Rational(1)};
    for (int i = 0; i < exponent_; ++i) {
        std::vector<Rational> next(b.size() + 1, Rational(0));
        for (std::size_t j = 0; j < b.size(); ++j) {
            next[j] += b[j];
            next[j + 1] -= b[j];
        }
        b = std::move(next);
    }
    std::vector<Rational> out(b.size() + poly_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < poly_.size(); ++j) out[i + j] += b[i] * poly_[j];
    for (auto& q : out) q *= constant_;
    return out;
}

} // namespace kpde
