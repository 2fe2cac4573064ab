#pragma once

#include <cmath>
#include <utility>

#include <functional>
#include <string_view>

#include "kpde/kernel.hpp"
#include "kpde/semidiscrete.hpp"

namespace kpde {

enum class Series { A, B };

char series_letter(Series s);
Series parse_series(std::string_view text);

/// Manufactured Burgers test: rho(t, x) = psi(x + t) solves
///
///     d/dt rho - rho d/dx rho = [(1 - psi) psi'](x + t)
///
/// with psi = delta^{-1} eta(|x| / delta) supported in [-delta, delta].
///   A: scheme kernel eta^{4,4}; eta = order-4 composite of phi_{2,2} with 1D constant 9/16.
///   B: scheme kernel eta^{2,2}; eta = phi_{2,1} with 1D constant 3/2.
struct SeriesSpec {
    Series id = Series::A;
    KernelSpec scheme_kernel{4, 4, 1};
    double delta = 0.5;
    double t_final = 0.5;
    Vec window_lo{-1.25, 0.0, 0.0};
    Vec window_hi{0.75, 0.0, 0.0};
    /// Default dt / eps. Series A needs 0.05 for the time error to stay a few percent of the total.
    double cfl = 0.1;

    static SeriesSpec of(Series id);
};

/// One-dimensional initial profile psi(x) = delta^{-1} eta(|x| / delta).
class Profile {
public:
    Profile(CompositeRadialKernel shape, double delta);

    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double derivative(double x) const;
    /// {psi(x), psi'(x)}. All three accessors share one piecewise polynomial.
    [[nodiscard]] std::pair<double, double> value_and_derivative(double x) const {
        const double s = std::abs(x);
        if (s >= delta_) return {0.0, 0.0};
        std::size_t p = 0;
        while (p + 1 < pieces_.size() && s >= pieces_[p + 1].lo) ++p;
        const auto& c = pieces_[p];
        // independent Horner chains in s = |x|
        double v = c.value.back();
        for (std::size_t i = c.value.size() - 1; i-- > 0;) v = v * s + c.value[i];
        double d = c.slope.back();
        for (std::size_t i = c.slope.size() - 1; i-- > 0;) d = d * s + c.slope[i];
        return {v, x < 0.0 ? -d : d};
    }
    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] const CompositeRadialKernel& shape() const noexcept { return shape_; }

private:
    CompositeRadialKernel shape_;
    double delta_;
    struct Piece {
        double lo; // in |x|
        std::vector<double> value;
        std::vector<double> slope;
    };
    std::vector<Piece> pieces_;
};

/// psi for the series (delta = 0.5 unless overridden).
Profile series_profile(Series id, double delta = 0.5);

/// f(t, x, rho, g) = -rho g - [(1 - psi) psi'](x + t), exact solution psi(x + t).
DefiningFunction burgers_f(const SeriesSpec& series);

/// f(t, x, rho, g) = u g with exact solution profile(x - c - u t), where the
/// centre c keeps the transported support symmetric inside the window
/// [-1.25, 0.75] over [0, t_final]. Throws ConfigError if it does not fit.
DefiningFunction linear_transport(double u, const Profile& profile, double t_final);

/// "burgers-a", "burgers-b" or "transport:<u>" (transport uses the series-A profile).
DefiningFunction parse_problem(std::string_view text, double t_final);

} // namespace kpde
