#include "kpde/problems.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <string>

#include "kpde/errors.hpp"
#include "kpde/format.hpp"

namespace kpde {

char series_letter(Series s) {
    return s == Series::A ? 'A' : 'B';
}

Series parse_series(std::string_view text) {
    if (text == "A" || text == "a") return Series::A;
    if (text == "B" || text == "b") return Series::B;
    throw ConfigError("unknown series '" + std::string(text) + "' (use A or B)");
}

SeriesSpec SeriesSpec::of(Series id) {
    SeriesSpec s;
    s.id = id;
    s.scheme_kernel = id == Series::A ? KernelSpec{4, 4, 1} : KernelSpec{2, 2, 1};
    s.cfl = id == Series::A ? 0.05 : 0.1;
    return s;
}

Profile::Profile(CompositeRadialKernel shape, double delta) : shape_(std::move(shape)), delta_(delta) {
    if (shape_.dim() != 1) throw ConfigError("profiles are one-dimensional");
    if (!(delta > 0.0)) throw ConfigError("profile half-width must be positive");
    // psi(x) = sum_i c_i |x|^i / delta^(i+1) on each piece
    for (const auto& piece : shape_.pieces()) {
        Piece p{piece.lo * delta, {}, {}};
        double scale = 1.0 / delta;
        for (double c : piece.coeffs) {
            p.value.push_back(c * scale);
            scale /= delta;
        }
        for (std::size_t i = 1; i < p.value.size(); ++i) p.slope.push_back(static_cast<double>(i) * p.value[i]);
        if (p.slope.empty()) p.slope.push_back(0.0);
        pieces_.push_back(std::move(p));
    }
}

double Profile::value(double x) const {
    return value_and_derivative(x).first;
}

double Profile::derivative(double x) const {
    return value_and_derivative(x).second;
}

Profile series_profile(Series id, double delta) {
    if (id == Series::A) {
        // 4th-order composite on phi_{2,2}, renormalized to unit mass on R
        const auto base = WendlandBase::table(2, 2).with_constant(Rational(9, 16));
        const std::vector<double> nodes{1.0, 0.8};
        auto weights = high_order_weights(nodes, 1);
        return {CompositeRadialKernel(base, 1, nodes, std::move(weights)), delta};
    }
    const auto base = WendlandBase::table(2, 1).with_constant(Rational(3, 2));
    return {CompositeRadialKernel(base, 1, {1.0}, {1.0}), delta};
}

DefiningFunction burgers_f(const SeriesSpec& series) {
    const auto psi = std::make_shared<const Profile>(series_profile(series.id, series.delta));
    DefiningFunction p;
    p.name = std::string("burgers-") + static_cast<char>(std::tolower(series_letter(series.id)));
    p.dim = 1;
    p.f = [psi](double t, const Vec& x, double rho, const Vec& grad) {
        const double y = x[0] + t;
        if (std::abs(y) >= psi->delta()) return -rho * grad[0];
        const auto [v, d] = psi->value_and_derivative(y);
        return -rho * grad[0] - (1.0 - v) * d;
    };
    p.f_batch = [psi](double t, long i0, double h, const double* rho, const double* grad, double* out,
                      std::size_t n) {
        const double delta = psi->delta();
        for (std::size_t k = 0; k < n; ++k) {
            const double y = static_cast<double>(i0 + static_cast<long>(k)) * h + t;
            double src = 0.0;
            if (std::abs(y) < delta) {
                const auto [v, d] = psi->value_and_derivative(y);
                src = (1.0 - v) * d;
            }
            out[k] = -rho[k] * grad[k] - src;
        }
    };
    p.initial = [psi](const Vec& x) { return psi->value(x[0]); };
    p.exact_solution = [psi](double t, const Vec& x) { return psi->value(x[0] + t); };
    p.exact_gradient = [psi](double t, const Vec& x) { return Vec{psi->derivative(x[0] + t), 0.0, 0.0}; };
    p.window_lo = series.window_lo;
    p.window_hi = series.window_hi;
    return p;
}

DefiningFunction linear_transport(double u, const Profile& profile, double t_final) {
    const Vec lo{-1.25, 0.0, 0.0};
    const Vec hi{0.75, 0.0, 0.0};
    const double centre = 0.5 * (lo[0] + hi[0]) - 0.5 * u * t_final;
    const double reach = profile.delta() + 0.5 * std::abs(u) * t_final;
    if (centre - reach < lo[0] || centre + reach > hi[0]) {
        throw ConfigError("transported support does not fit the window for u=" + format_double(u));
    }
    const auto psi = std::make_shared<const Profile>(profile);
    DefiningFunction p;
    p.name = "transport:" + format_double(u);
    p.dim = 1;
    p.f = [u](double, const Vec&, double, const Vec& grad) { return u * grad[0]; };
    p.f_batch = [u](double, long, double, const double*, const double* grad, double* out, std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) out[k] = u * grad[k];
    };
    p.initial = [psi, centre](const Vec& x) { return psi->value(x[0] - centre); };
    p.exact_solution = [psi, centre, u](double t, const Vec& x) { return psi->value(x[0] - centre - u * t); };
    p.exact_gradient = [psi, centre, u](double t, const Vec& x) {
        return Vec{psi->derivative(x[0] - centre - u * t), 0.0, 0.0};
    };
    p.window_lo = lo;
    p.window_hi = hi;
    return p;
}

DefiningFunction parse_problem(std::string_view text, double t_final) {
    if (text == "burgers-a") return burgers_f(SeriesSpec::of(Series::A));
    if (text == "burgers-b") return burgers_f(SeriesSpec::of(Series::B));
    if (text.starts_with("transport:"))
        return linear_transport(parse_double(text.substr(10)), series_profile(Series::A), t_final);
    throw ConfigError("unknown problem '" + std::string(text) +
                      "' (use burgers-a, burgers-b or transport:<u>)");
}

} // namespace kpde
