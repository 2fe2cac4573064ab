#include "kpde/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "kpde/errors.hpp"
#include "kpde/quadrature.hpp"

namespace kpde {

namespace {

double to_double(Rational q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::vector<int> split_ints(std::string_view text, std::string_view what) {
    std::vector<int> out;
    while (!text.empty()) {
        const auto colon = text.find(':');
        const auto part = text.substr(0, colon);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw ConfigError("malformed " + std::string(what) + " kernel spec field '" +
                              std::string(part) + "'");
        out.push_back(v);
        if (colon == std::string_view::npos) break;
        text.remove_prefix(colon + 1);
    }
    return out;
}

} // namespace

CompositeRadialKernel::CompositeRadialKernel(WendlandBase base, int dim, std::vector<double> nodes,
                                             std::vector<double> weights)
    : base_(std::move(base)), dim_(dim), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (dim_ < 1 || dim_ > kMaxDim) throw ConfigError("kernel dimension must be 1, 2 or 3");
    if (nodes_.empty() || nodes_.size() != weights_.size())
        throw ConfigError("kernel needs one weight per node");
    double amax = 0.0;
    for (double a : nodes_) {
        if (!(a > 0.0)) throw ConfigError("kernel nodes must be positive");
        amax = std::max(amax, a);
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (std::size_t j = i + 1; j < nodes_.size(); ++j)
            if (nodes_[i] == nodes_[j]) throw SingularNodesError("repeated kernel nodes");
    if (amax != 1.0) throw ConfigError("largest kernel node must be 1 (support [0, 1])");
}

double CompositeRadialKernel::eval(double r, int m) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double a = nodes_[j];
        const double scale = m == 0 ? 1.0 : (m == 1 ? 1.0 / a : std::pow(a, -m));
        acc += weights_[j] * scale * base_.eval(r / a, m);
    }
    return acc;
}

std::vector<double> CompositeRadialKernel::breakpoints() const {
    std::vector<double> b{0.0};
    b.insert(b.end(), nodes_.begin(), nodes_.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

std::vector<CompositeRadialKernel::Piece> CompositeRadialKernel::pieces() const {
    const auto exp = base_.expanded();
    const double cpi = base_.constant_over_pi() ? 1.0 / M_PI : 1.0;
    const auto br = breakpoints();
    std::vector<Piece> out;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        Piece piece{br[p], br[p + 1], std::vector<double>(exp.size(), 0.0)};
        const double mid = 0.5 * (piece.lo + piece.hi);
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            const double a = nodes_[j];
            if (mid >= a) continue; // phi(r / a) vanishes on this piece
            double ai = 1.0;
            for (std::size_t i = 0; i < exp.size(); ++i) {
                piece.coeffs[i] += weights_[j] * cpi * to_double(exp[i]) / ai;
                ai *= a;
            }
        }
        out.push_back(std::move(piece));
    }
    return out;
}

std::vector<double> high_order_weights(std::span<const double> nodes, int dim) {
    for (double a : nodes)
        if (!(a > 0.0)) throw ConfigError("kernel nodes must be positive");
    std::vector<double> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double aj2 = nodes[j] * nodes[j];
        double w = std::pow(nodes[j], -dim);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (i == j) continue;
            const double ai2 = nodes[i] * nodes[i];
            if (ai2 == aj2) throw SingularNodesError("repeated kernel nodes: Vandermonde matrix is singular");
            w *= ai2 / (ai2 - aj2);
        }
        out[j] = w;
    }
    return out;
}

std::vector<Rational> high_order_weights(std::span<const Rational> nodes, int dim) {
    for (const auto& a : nodes)
        if (a <= Rational(0)) throw ConfigError("kernel nodes must be positive");
    std::vector<Rational> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const Rational aj2 = nodes[j] * nodes[j];
        Rational w(1);
        for (int d = 0; d < dim; ++d) w /= nodes[j];
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (i == j) continue;
            const Rational ai2 = nodes[i] * nodes[i];
            if (ai2 == aj2) throw SingularNodesError("repeated kernel nodes: Vandermonde matrix is singular");
            w *= ai2 / (ai2 - aj2);
        }
        out[j] = w;
    }
    return out;
}

std::vector<Rational> preset_nodes(int order) {
    switch (order) {
    case 2: return {Rational(1)};
    case 4: return {Rational(1), Rational(4, 5)};
    case 6: return {Rational(1), Rational(4, 5), Rational(3, 5)};
    default: throw ConfigError("no preset nodes for kernel order " + std::to_string(order) +
                               " (supported: 2, 4, 6)");
    }
}

CompositeRadialKernel make_kernel(const KernelSpec& spec) {
    const bool ok = (spec.order == 2 || spec.order == 4 || spec.order == 6) &&
                    (spec.smoothness == 2 || spec.smoothness == 4 || spec.smoothness == 6) &&
                    spec.dim >= 1 && spec.dim <= 3;
    if (!ok) {
        throw ConfigError("unsupported kernel (order=" + std::to_string(spec.order) +
                          ", smoothness=" + std::to_string(spec.smoothness) +
                          ", dim=" + std::to_string(spec.dim) +
                          "); supported: order in {2,4,6}, smoothness in {2,4,6}, dim in {1,2,3}");
    }
    const auto exact = preset_nodes(spec.order);
    const auto lam = high_order_weights(std::span<const Rational>(exact), spec.dim);
    std::vector<double> nodes, weights;
    for (std::size_t j = 0; j < exact.size(); ++j) {
        nodes.push_back(to_double(exact[j]));
        weights.push_back(to_double(lam[j]));
    }
    return {WendlandBase::table(spec.dim, spec.smoothness / 2), spec.dim, std::move(nodes),
            std::move(weights)};
}

CompositeRadialKernel parse_kernel_spec(std::string_view text) {
    if (text.starts_with("wendland:")) {
        const auto f = split_ints(text.substr(9), "wendland");
        if (f.size() != 2) throw ConfigError("expected wendland:<n>:<k_base>");
        return {WendlandBase::table(f[0], f[1]), f[0], {1.0}, {1.0}};
    }
    if (text.starts_with("composite:")) {
        const auto f = split_ints(text.substr(10), "composite");
        if (f.size() != 3) throw ConfigError("expected composite:<order>:<smoothness>:<n>");
        return make_kernel({f[0], f[1], f[2]});
    }
    throw ConfigError("unknown kernel spec '" + std::string(text) +
                      "' (use wendland:<n>:<k_base> or composite:<order>:<smoothness>:<n>)");
}

double kernel_moment(const CompositeRadialKernel& kernel, int i) {
    const int power = kernel.dim() - 1 + 2 * i;
    const auto br = kernel.breakpoints();
    return quad::panels([&](double r) { return kernel.eval(r) * std::pow(r, power); }, br);
}

ScaledKernel::ScaledKernel(CompositeRadialKernel kernel, double epsilon)
    : kernel_(std::move(kernel)), eps_(epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("kernel scale epsilon must be positive");
    scale0_ = std::pow(eps_, -kernel_.dim());
    scale1_ = scale0_ / eps_;
}

double ScaledKernel::radial(double r) const {
    return scale0_ * kernel_.eval(r / eps_);
}

double ScaledKernel::radial_derivative(double r) const {
    if (kernel_.smoothness() < 1)
        throw SmoothnessError("gradient of a C^0 kernel requested");
    return scale1_ * kernel_.eval(r / eps_, 1);
}

double ScaledKernel::value(const Vec& x) const {
    return radial(norm(x, dim()));
}

Vec ScaledKernel::gradient(const Vec& x) const {
    const double r = norm(x, dim());
    const double dr = radial_derivative(r);
    Vec g{};
    if (r == 0.0 || dr == 0.0) return g;
    for (int d = 0; d < dim(); ++d) g[d] = dr * x[d] / r;
    return g;
}

double ScaledKernel::eval(const Vec& x, Deriv alpha) const {
    if (alpha.order() == 0) return value(x);
    if (alpha.axis >= dim()) throw ConfigError("derivative axis out of range");
    return gradient(x)[alpha.axis];
}

double lp_norm(const ScaledKernel& kernel, int deriv_order, double p) {
    if (deriv_order < 0 || deriv_order > 1) throw ConfigError("lp_norm supports |alpha| <= 1");
    if (!(p >= 1.0)) throw ConfigError("lp_norm needs p >= 1");
    const int n = kernel.dim();
    const double eps = kernel.epsilon();
    auto g = [&](double r) {
        return deriv_order == 0 ? kernel.radial(r) : kernel.radial_derivative(r);
    };

    std::vector<double> br;
    for (double b : kernel.kernel().breakpoints()) br.push_back(b * eps);

    // refine at sign changes of g so |g| is smooth on each panel
    constexpr int samples = 400;
    std::vector<double> fine{br.front()};
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double lo = br[k], hi = br[k + 1];
        double x0 = lo, g0 = g(lo + 1e-15 * (hi - lo));
        for (int s = 1; s <= samples; ++s) {
            const double x1 = s == samples ? hi : lo + (hi - lo) * s / samples;
            const double g1 = g(s == samples ? hi - 1e-15 * (hi - lo) : x1);
            if ((g0 < 0.0) != (g1 < 0.0) && g0 != 0.0 && g1 != 0.0) {
                double a = x0, b = x1, ga = g0;
                for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * b; ++it) {
                    const double m = 0.5 * (a + b);
                    const double gm = g(m);
                    if ((gm < 0.0) == (ga < 0.0)) { a = m; ga = gm; } else { b = m; }
                }
                fine.push_back(0.5 * (a + b));
            }
            x0 = x1;
            g0 = g1;
        }
        fine.push_back(hi);
    }

    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t k = 0; k + 1 < fine.size(); ++k) {
            const double lo = fine[k], hi = fine[k + 1];
            auto neg = [&](double r) { return -std::abs(g(r)); };
            const auto [rmin, fmin] = boost::math::tools::brent_find_minima(neg, lo, hi, 52);
            best = std::max({best, -fmin, std::abs(g(lo)), std::abs(g(hi))});
        }
        return best;
    }

    auto integrand = [&](double r) {
        return std::pow(std::abs(g(r)), p) * std::pow(r, n - 1);
    };
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < fine.size(); ++k) {
        // non-integer p leaves |g|^p non-polynomial; subdivide
        constexpr int sub = 8;
        const double lo = fine[k], hi = fine[k + 1];
        for (int s = 0; s < sub; ++s)
            sum += quad::gauss20(integrand, lo + (hi - lo) * s / sub, lo + (hi - lo) * (s + 1) / sub);
    }
    return std::pow(sphere_area(n) * sum, 1.0 / p);
}

} // namespace kpde
