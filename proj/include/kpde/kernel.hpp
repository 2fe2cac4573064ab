#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpde/geometry.hpp"
#include "kpde/wendland.hpp"

namespace kpde {

/// Order/smoothness/dimension triple naming one of the preset kernels.
struct KernelSpec {
    int order = 4;
    int smoothness = 4;
    int dim = 1;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Radial profile eta(r) = sum_j lambda_j phi(r / a_j) of a kernel on R^n.
///
/// With weights from high_order_weights() the radial kernel eta(|x|) has
/// unit mass and vanishing moments up to order 2 * nodes().size() - 1.
/// Immutable after construction.
class CompositeRadialKernel {
public:
    /// Nodes must be positive and pairwise distinct with maximum 1.
    CompositeRadialKernel(WendlandBase base, int dim, std::vector<double> nodes,
                          std::vector<double> weights);

    [[nodiscard]] const WendlandBase& base() const noexcept { return base_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] int order() const noexcept { return 2 * static_cast<int>(nodes_.size()); }
    [[nodiscard]] int smoothness() const noexcept { return base_.max_derivative(); }

    /// d^m/dr^m eta(r), r >= 0.
    [[nodiscard]] double eval(double r, int m = 0) const;

    /// Sorted points 0 < ... <= 1 where eta switches polynomial piece, with 0 prepended.
    [[nodiscard]] std::vector<double> breakpoints() const;

    struct Piece {
        double lo;
        double hi;
        std::vector<double> coeffs; // increasing powers of r
    };
    /// Expanded monomial form of eta on each interval between breakpoints.
    [[nodiscard]] std::vector<Piece> pieces() const;

private:
    WendlandBase base_;
    int dim_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// lambda_j = a_j^{-n} prod_{i != j} a_i^2 / (a_i^2 - a_j^2).
/// Throws SingularNodesError on repeated nodes, ConfigError on non-positive ones.
std::vector<double> high_order_weights(std::span<const double> nodes, int dim);

/// Same closed form in exact arithmetic.
std::vector<Rational> high_order_weights(std::span<const Rational> nodes, int dim);

/// Preset nodes: (1), (1, 4/5) or (1, 4/5, 3/5) for order 2, 4, 6.
std::vector<Rational> preset_nodes(int order);

/// eta^{k,s} in R^n: base phi_{n, s/2}, preset nodes, closed-form weights.
/// Throws ConfigError for anything outside k, s in {2,4,6}, n in {1,2,3}.
CompositeRadialKernel make_kernel(const KernelSpec& spec);

/// Parses "wendland:<n>:<k_base>" or "composite:<order>:<smoothness>:<n>".
CompositeRadialKernel parse_kernel_spec(std::string_view text);

/// int_0^inf eta(r) r^{n-1+2i} dr by panelwise Gauss-Legendre, exact up to rounding.
double kernel_moment(const CompositeRadialKernel& kernel, int i);

/// zeta_eps(x) = eps^{-n} eta(|x| / eps). Immutable.
class ScaledKernel {
public:
    ScaledKernel(CompositeRadialKernel kernel, double epsilon);

    [[nodiscard]] const CompositeRadialKernel& kernel() const noexcept { return kernel_; }
    [[nodiscard]] double epsilon() const noexcept { return eps_; }
    [[nodiscard]] int dim() const noexcept { return kernel_.dim(); }
    [[nodiscard]] double support_radius() const noexcept { return eps_; }

    /// eps^{-n} eta(r / eps)
    [[nodiscard]] double radial(double r) const;
    /// d/dr of radial(); requires smoothness >= 1.
    [[nodiscard]] double radial_derivative(double r) const;

    [[nodiscard]] double value(const Vec& x) const;
    /// Zero at x = 0 (odd derivative of an even function).
    [[nodiscard]] Vec gradient(const Vec& x) const;
    /// value() or one component of gradient().
    [[nodiscard]] double eval(const Vec& x, Deriv alpha) const;

private:
    CompositeRadialKernel kernel_;
    double eps_;
    double scale0_; // eps^{-n}
    double scale1_; // eps^{-n-1}
};

/// L_p norm over R^n of zeta_eps (deriv_order 0) or |grad zeta_eps| (deriv_order 1),
/// p in [1, inf]. Panels are split at sign changes so each integrand piece is a
/// polynomial.
double lp_norm(const ScaledKernel& kernel, int deriv_order, double p);

} // namespace kpde
