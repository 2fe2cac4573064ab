#include "kpde/quasi_interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "kpde/errors.hpp"
#include "kpde/parallel.hpp"

namespace kpde {

namespace {

void check_match(const CoefficientField& field, const Stencil& stencil) {
    if (field.grid.dim() != stencil.dim || field.grid.spacing() != stencil.h)
        throw ConfigError("stencil was built for a different grid (h or dimension mismatch)");
}

constexpr std::size_t kChunk = 8;

typedef double V4 __attribute__((vector_size(32)));

inline V4 load4(const double* p) {
    V4 v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

// 1D fast path. Symmetric/antisymmetric pairs share the loads:
//   value_i = h (z_0 rho_i + sum_{m>0} z_m (rho_{i-m} + rho_{i+m}))
//   grad_i  = h sum_{m>0} g_m (rho_{i-m} - rho_{i+m})
void sweep_1d(const std::vector<double>& padded, const Stencil& s, std::size_t begin, std::size_t end,
              double* value, double* grad) {
    const auto M = static_cast<std::size_t>(s.radius);
    const double* p = padded.data() + M;
    const double* z = s.half0.data();
    const double* g = s.half1.data();
    auto store = [&](std::size_t i, double a0, double a1) {
        if (value) value[i] = s.h * a0;
        if (grad) grad[i] = s.h * a1;
    };
    // 8-site chunks, accumulators held in registers across the offset loop
    std::size_t i = begin;
    for (; i + kChunk <= end; i += kChunk) {
        const double* c = p + i;
        V4 v0 = load4(c) * z[0], v1 = load4(c + 4) * z[0];
        V4 g0{}, g1{};
        for (std::size_t m = 1; m <= M; ++m) {
            const V4 l0 = load4(c - m), l1 = load4(c - m + 4);
            const V4 h0 = load4(c + m), h1 = load4(c + m + 4);
            v0 += z[m] * (l0 + h0);
            v1 += z[m] * (l1 + h1);
            g0 += g[m] * (l0 - h0);
            g1 += g[m] * (l1 - h1);
        }
        for (std::size_t b = 0; b < 4; ++b) {
            store(i + b, v0[b], g0[b]);
            store(i + 4 + b, v1[b], g1[b]);
        }
    }
    for (; i < end; ++i) {
        const double* c = p + i;
        double a0 = z[0] * c[0], a1 = 0.0;
        for (std::size_t m = 1; m <= M; ++m) {
            a0 += z[m] * (c[-static_cast<std::ptrdiff_t>(m)] + c[m]);
            a1 += g[m] * (c[-static_cast<std::ptrdiff_t>(m)] - c[m]);
        }
        store(i, a0, a1);
    }
}

std::vector<double> pad(const CoefficientField& field, long radius) {
    std::vector<double> padded(field.values.size() + 2 * static_cast<std::size_t>(radius), 0.0);
    std::copy(field.values.begin(), field.values.end(), padded.begin() + radius);
    return padded;
}

// Generic n-dimensional path: lexicographic offset order, out-of-box sites skipped.
void sweep_generic(const CoefficientField& field, const Stencil& s, std::size_t begin,
                   std::size_t end, double* value, std::vector<double*>& grad) {
    const auto& grid = field.grid;
    const double hn = std::pow(s.h, s.dim);
    for (std::size_t k = begin; k < end; ++k) {
        const Index i = grid.multi(k);
        double v = 0.0;
        Vec g{};
        for (std::size_t o = 0; o < s.offsets.size(); ++o) {
            Index j = i;
            for (int d = 0; d < s.dim; ++d) j[d] -= s.offsets[o][d];
            if (!grid.contains(j)) continue;
            const double rho = field.values[grid.flat(j)];
            v += s.values0[o] * rho;
            for (int d = 0; d < s.dim; ++d) g[d] += s.values1[o][d] * rho;
        }
        if (value) value[k] = hn * v;
        for (int d = 0; d < s.dim; ++d)
            if (grad[d]) grad[d][k] = hn * g[d];
    }
}

} // namespace

Stencil make_stencil(const ScaledKernel& kernel, double h) {
    if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
    Stencil s;
    s.dim = kernel.dim();
    s.h = h;
    s.epsilon = kernel.epsilon();
    // offsets with |m| h < eps
    s.radius = static_cast<long>(std::ceil(s.epsilon / h)) - 1;
    const bool smooth = kernel.kernel().smoothness() >= 1;

    const long R = s.radius;
    Index m{};
    const auto visit = [&](auto&& self, int d) -> void {
        if (d == s.dim) {
            Vec x{};
            for (int e = 0; e < s.dim; ++e) x[e] = static_cast<double>(m[e]) * h;
            if (norm(x, s.dim) >= s.epsilon) return;
            s.offsets.push_back(m);
            s.values0.push_back(kernel.value(x));
            s.values1.push_back(smooth ? kernel.gradient(x) : Vec{});
            return;
        }
        for (long v = -R; v <= R; ++v) {
            m[d] = v;
            self(self, d + 1);
        }
        m[d] = 0;
    };
    visit(visit, 0);

    if (s.dim == 1) {
        s.half0.assign(static_cast<std::size_t>(R) + 1, 0.0);
        s.half1.assign(static_cast<std::size_t>(R) + 1, 0.0);
        for (long k = 0; k <= R; ++k) {
            const Vec x{static_cast<double>(k) * h, 0.0, 0.0};
            s.half0[k] = kernel.value(x);
            s.half1[k] = smooth ? kernel.gradient(x)[0] : 0.0;
        }
    }
    return s;
}

double evaluate(const CoefficientField& field, const ScaledKernel& kernel, const Vec& x, Deriv alpha) {
    const auto& grid = field.grid;
    const int n = grid.dim();
    const double h = grid.spacing();
    const double eps = kernel.epsilon();
    if (alpha.order() == 1 && kernel.kernel().smoothness() < 1)
        throw SmoothnessError("gradient of a C^0 kernel requested");

    Index lo{}, hi{};
    for (int d = 0; d < n; ++d) {
        lo[d] = std::max(grid.lo()[d], static_cast<long>(std::ceil((x[d] - eps) / h)));
        hi[d] = std::min(grid.hi()[d], static_cast<long>(std::floor((x[d] + eps) / h)));
        if (lo[d] > hi[d]) return 0.0;
    }
    double sum = 0.0;
    Index j = lo;
    while (true) {
        Vec diff{};
        for (int d = 0; d < n; ++d) diff[d] = x[d] - static_cast<double>(j[d]) * h;
        if (norm(diff, n) < eps) sum += field.values[grid.flat(j)] * kernel.eval(diff, alpha);
        int d = n - 1;
        while (d >= 0 && j[d] == hi[d]) {
            j[d] = lo[d];
            --d;
        }
        if (d < 0) break;
        ++j[d];
    }
    return std::pow(h, n) * sum;
}

CoefficientField evaluate_on_grid(const CoefficientField& field, const Stencil& stencil, Deriv alpha,
                                  int jobs) {
    check_match(field, stencil);
    if (alpha.axis >= stencil.dim) throw ConfigError("derivative axis out of range");
    CoefficientField out(field.grid, field.time);
    if (stencil.dim == 1) {
        const auto padded = pad(field, stencil.radius);
        parallel_for(out.values.size(), jobs, [&](std::size_t b, std::size_t e) {
            if (alpha.order() == 0)
                sweep_1d(padded, stencil, b, e, out.values.data(), nullptr);
            else
                sweep_1d(padded, stencil, b, e, nullptr, out.values.data());
        });
        return out;
    }
    parallel_for(out.values.size(), jobs, [&](std::size_t b, std::size_t e) {
        std::vector<double*> grad(stencil.dim, nullptr);
        double* value = nullptr;
        if (alpha.order() == 0)
            value = out.values.data();
        else
            grad[alpha.axis] = out.values.data();
        sweep_generic(field, stencil, b, e, value, grad);
    });
    return out;
}

void evaluate_with_gradient_into(const UniformGrid& grid, const std::vector<double>& values,
                                 const Stencil& stencil, std::vector<double>& padded,
                                 std::vector<double>& value,
                                 std::vector<std::vector<double>>& gradient, int jobs) {
    if (grid.dim() != stencil.dim || grid.spacing() != stencil.h)
        throw ConfigError("stencil was built for a different grid (h or dimension mismatch)");
    const std::size_t n = values.size();
    if (stencil.dim == 1) {
        const auto R = static_cast<std::size_t>(stencil.radius);
        padded.resize(n + 2 * R);
        std::fill(padded.begin(), padded.begin() + R, 0.0);
        std::copy(values.begin(), values.end(), padded.begin() + R);
        std::fill(padded.begin() + R + n, padded.end(), 0.0);
        parallel_for(n, jobs, [&](std::size_t b, std::size_t e) {
            sweep_1d(padded, stencil, b, e, value.data(), gradient[0].data());
        });
        return;
    }
    const CoefficientField field(grid, values);
    parallel_for(n, jobs, [&](std::size_t b, std::size_t e) {
        std::vector<double*> grad;
        for (auto& g : gradient) grad.push_back(g.data());
        sweep_generic(field, stencil, b, e, value.data(), grad);
    });
}

GridEvaluation evaluate_with_gradient(const CoefficientField& field, const Stencil& stencil, int jobs) {
    check_match(field, stencil);
    const std::size_t n = field.values.size();
    GridEvaluation ev;
    ev.value.assign(n, 0.0);
    ev.gradient.assign(stencil.dim, std::vector<double>(n, 0.0));
    std::vector<double> padded;
    evaluate_with_gradient_into(field.grid, field.values, stencil, padded, ev.value, ev.gradient, jobs);
    return ev;
}

double linf_grid_error(const CoefficientField& field, const Stencil& stencil,
                       const std::function<double(const Vec&)>& exact, ErrorMode mode, Deriv alpha) {
    double err = 0.0;
    if (mode == ErrorMode::coefficient) {
        for (std::size_t k = 0; k < field.values.size(); ++k)
            err = std::max(err, std::abs(field.values[k] - exact(field.grid.point(k))));
        return err;
    }
    const auto approx = evaluate_on_grid(field, stencil, alpha);
    for (std::size_t k = 0; k < approx.values.size(); ++k)
        err = std::max(err, std::abs(approx.values[k] - exact(field.grid.point(k))));
    return err;
}

} // namespace kpde
