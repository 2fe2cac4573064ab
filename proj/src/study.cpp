#include "kpde/study.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "kpde/errors.hpp"
#include "kpde/format.hpp"

namespace kpde {

ErrorTable::ErrorTable(std::vector<int> nu_h, std::vector<int> nu_eps, std::string series)
    : nu_h_(std::move(nu_h)), nu_eps_(std::move(nu_eps)), series_(std::move(series)) {}

void ErrorTable::set(int nu_h, int nu_eps, double error) {
    if (nu_h >= nu_eps) throw ConfigError("table cells need h < eps");
    if (std::find(nu_h_.begin(), nu_h_.end(), nu_h) == nu_h_.end()) nu_h_.push_back(nu_h);
    if (std::find(nu_eps_.begin(), nu_eps_.end(), nu_eps) == nu_eps_.end()) nu_eps_.push_back(nu_eps);
    cells_[{nu_h, nu_eps}] = error;
}

std::optional<double> ErrorTable::get(int nu_h, int nu_eps) const {
    const auto it = cells_.find({nu_h, nu_eps});
    if (it == cells_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::tuple<int, int, double>> ErrorTable::cells() const {
    std::vector<std::tuple<int, int, double>> out;
    for (int r : nu_h_)
        for (int c : nu_eps_)
            if (const auto v = get(r, c)) out.emplace_back(r, c, *v);
    return out;
}

std::vector<int> parse_range(std::string_view text) {
    const auto dots = text.find("..");
    auto to_int = [&](std::string_view s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw ConfigError("bad range '" + std::string(text) + "' (expected lo..hi)");
        return v;
    };
    if (dots == std::string_view::npos) return {to_int(text)};
    const int a = to_int(text.substr(0, dots));
    const int b = to_int(text.substr(dots + 2));
    std::vector<int> out;
    const int step = a <= b ? 1 : -1;
    for (int v = a;; v += step) {
        out.push_back(v);
        if (v == b) break;
    }
    return out;
}

double series_error(Series series, int nu_h, int nu_eps, const RunOptions& options) {
    const auto spec = SeriesSpec::of(series);
    const auto problem = burgers_f(spec);
    SolverConfig cfg;
    cfg.h = std::ldexp(1.0, nu_h);
    cfg.epsilon = std::ldexp(1.0, nu_eps);
    cfg.kernel = spec.scheme_kernel;
    cfg.t_final = spec.t_final;
    cfg.dt = options.dt;
    cfg.cfl = options.cfl.value_or(spec.cfl);
    cfg.jobs = options.jobs;
    const auto result = solve(problem, cfg);
    const auto stencil = make_stencil(ScaledKernel(make_kernel(cfg.kernel), cfg.epsilon), cfg.h);
    const double T = cfg.t_final;
    return linf_grid_error(result.final_state, stencil,
                           [&](const Vec& x) { return problem.exact_solution(T, x); },
                           ErrorMode::quasi_interpolant);
}

ErrorTable run_table(Series series, const std::vector<int>& nu_h, const std::vector<int>& nu_eps,
                     const TableOptions& options) {
    if (nu_h.empty() || nu_eps.empty()) throw ConfigError("empty nu range");
    ErrorTable table(nu_h, nu_eps, std::string(1, series_letter(series)));
    std::vector<std::pair<int, int>> todo;
    for (int r : nu_h)
        for (int c : nu_eps)
            if (r < c) todo.emplace_back(r, c);

    std::mutex lock;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < todo.size(); k = next++) {
            const auto [r, c] = todo[k];
            std::optional<double> err;
            try {
                err = series_error(series, r, c, options.run);
            } catch (const Error&) {
                // diverged or rejected: the cell stays blank
            }
            std::lock_guard guard(lock);
            if (err && std::isfinite(*err)) table.set(r, c, *err);
            if (options.progress) options.progress(r, c, err);
        }
    };
    const int workers = std::max(1, options.jobs);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return table;
}

void write_table_csv(std::ostream& out, const ErrorTable& table) {
    out << "nu_h,nu_eps,linf_error\n";
    for (const auto& [r, c, v] : table.cells()) out << r << ',' << c << ',' << format_double(v) << '\n';
}

ErrorTable read_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty table CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "nu_h,nu_eps,linf_error") throw ConfigError("unexpected table CSV header '" + line + "'");
    ErrorTable table;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("malformed table CSV line " + std::to_string(lineno));
        const std::string_view sv(line);
        const auto r = parse_range(sv.substr(0, c1));
        const auto c = parse_range(sv.substr(c1 + 1, c2 - c1 - 1));
        if (r.size() != 1 || c.size() != 1)
            throw ConfigError("malformed table CSV line " + std::to_string(lineno));
        table.set(r[0], c[0], parse_double(sv.substr(c2 + 1)));
    }
    return table;
}

std::string render_table(const ErrorTable& table) {
    std::ostringstream out;
    char buf[32];
    out << "  nu_h |";
    for (int c : table.nu_eps()) {
        std::snprintf(buf, sizeof buf, "%9d ", c);
        out << buf;
    }
    out << "   (columns: nu_eps)\n";
    out << std::string(8 + 10 * table.nu_eps().size(), '-') << '\n';
    for (int r : table.nu_h()) {
        std::snprintf(buf, sizeof buf, "%6d |", r);
        out << buf;
        for (int c : table.nu_eps()) {
            if (const auto v = table.get(r, c))
                std::snprintf(buf, sizeof buf, "%9.2e ", *v);
            else
                std::snprintf(buf, sizeof buf, "%9s ", "");
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

double FitResult::model(double h, double eps) const {
    return C1 * std::pow(eps, a) + C2 * std::pow(h, b) / std::pow(eps, c);
}

namespace {

struct Sample {
    double log_h;
    double log_eps;
    double log_err;
};

std::vector<Sample> samples_of(const ErrorTable& table) {
    std::vector<Sample> s;
    for (const auto& [r, c, v] : table.cells())
        if (v > 0.0) s.push_back({r * std::log(2.0), c * std::log(2.0), std::log(v)});
    return s;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// columns whose two finest-h entries agree to 30%
std::vector<std::pair<int, double>> plateaus(const ErrorTable& table) {
    std::vector<std::pair<int, double>> out;
    for (int c : table.nu_eps()) {
        std::vector<std::pair<int, double>> col;
        for (int r : table.nu_h())
            if (const auto v = table.get(r, c)) col.emplace_back(r, *v);
        if (col.size() < 2) continue;
        std::sort(col.begin(), col.end()); // most negative nu_h (finest) first
        const double e0 = col[0].second, e1 = col[1].second;
        if (std::max(e0, e1) <= 1.3 * std::min(e0, e1)) out.emplace_back(c, e0);
    }
    return out;
}

} // namespace

EpsFit fit_eps_regime(const ErrorTable& table) {
    const auto plat = plateaus(table);
    if (plat.size() < 2) throw FitError("fewer than two stagnated columns; cannot fit the eps regime");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [c, v] : plat) {
        const double x = c * std::log(2.0), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(plat.size());
    const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double logc = (sy - a * sx) / n;
    return {std::exp(logc), a, plat.size()};
}

FitResult fit_error_model(const ErrorTable& table) {
    const auto data = samples_of(table);
    if (data.size() < 8)
        throw FitError("error-model fit needs at least 8 cells, got " + std::to_string(data.size()));

    // eps regime
    const auto eps_fit = fit_eps_regime(table);
    double a = eps_fit.a;
    std::vector<double> c1s;
    for (const auto& [c, v] : plateaus(table)) c1s.push_back(std::log(v) - a * c * std::log(2.0));
    double logC1 = median(c1s);

    // h regime: cells well above the eps term
    std::vector<Sample> hdom;
    std::vector<double> excess;
    for (const auto& s : data) {
        const double eterm = std::exp(logC1 + a * s.log_eps);
        const double e = std::exp(s.log_err);
        if (e > 3.0 * eterm) {
            hdom.push_back(s);
            excess.push_back(std::log(e - eterm));
        }
    }
    double b = 3.0, c = 4.0, logC2 = 0.0;
    // b and c separate only across several h/eps ratios; one ratio fixes b - c alone
    std::map<long, int> per_ratio;
    for (const auto& s : hdom) ++per_ratio[std::lround((s.log_eps - s.log_h) / std::log(2.0))];
    const auto ratios = std::count_if(per_ratio.begin(), per_ratio.end(), [](auto& r) { return r.second >= 2; });
    bool reliable = hdom.size() >= 6 && ratios >= 3;
    if (hdom.size() >= 3) {
        Eigen::MatrixXd A(hdom.size(), 3);
        Eigen::VectorXd y(hdom.size());
        for (std::size_t k = 0; k < hdom.size(); ++k) {
            A(k, 0) = 1.0;
            A(k, 1) = hdom[k].log_h;
            A(k, 2) = -hdom[k].log_eps;
            y(k) = excess[k];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() == 3) {
            const Eigen::Vector3d sol = qr.solve(y);
            b = sol(1);
            c = sol(2);
            std::vector<double> c2s;
            for (std::size_t k = 0; k < hdom.size(); ++k)
                c2s.push_back(excess[k] - b * hdom[k].log_h + c * hdom[k].log_eps);
            logC2 = median(c2s);
        } else {
            reliable = false;
        }
    } else {
        reliable = false;
    }
    if (!reliable && hdom.size() < 3) {
        std::vector<double> c2s;
        for (const auto& s : data) c2s.push_back(s.log_err - b * s.log_h + c * s.log_eps);
        logC2 = median(c2s) - std::log(2.0);
    }

    // damped Gauss-Newton (Levenberg-Marquardt) in log space
    Eigen::Matrix<double, 5, 1> theta;
    theta << logC1, a, logC2, b, c;
    const auto n = static_cast<Eigen::Index>(data.size());
    auto evaluate = [&](const Eigen::Matrix<double, 5, 1>& th, Eigen::VectorXd& r,
                        Eigen::MatrixXd* J) {
        r.resize(n);
        if (J) J->resize(n, 5);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& s = data[static_cast<std::size_t>(k)];
            const double t1 = std::exp(th(0) + th(1) * s.log_eps);
            const double t2 = std::exp(th(2) + th(3) * s.log_h - th(4) * s.log_eps);
            const double m = t1 + t2;
            r(k) = std::log(m) - s.log_err;
            if (J) {
                (*J)(k, 0) = t1 / m;
                (*J)(k, 1) = t1 * s.log_eps / m;
                (*J)(k, 2) = t2 / m;
                (*J)(k, 3) = t2 * s.log_h / m;
                (*J)(k, 4) = -t2 * s.log_eps / m;
            }
        }
        return r.squaredNorm();
    };

    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    double cost = evaluate(theta, r, &J);
    double lambda = 1e-3;
    int it = 0;
    bool converged = false;
    for (; it < 200; ++it) {
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        Eigen::MatrixXd damped = JtJ;
        for (int d = 0; d < 5; ++d) damped(d, d) += lambda * std::max(JtJ(d, d), 1e-12);
        const Eigen::Matrix<double, 5, 1> step = damped.ldlt().solve(-g);
        Eigen::VectorXd r_new;
        const double cost_new = evaluate(theta + step, r_new, nullptr);
        if (std::isfinite(cost_new) && cost_new < cost) {
            theta += step;
            const double drop = cost - cost_new;
            cost = evaluate(theta, r, &J);
            lambda = std::max(lambda / 3.0, 1e-12);
            if (drop <= 1e-14 * std::max(cost, 1e-300) || step.norm() < 1e-10) {
                converged = true;
                break;
            }
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) {
                converged = true; // no descent direction left: stationary point
                break;
            }
        }
    }
    if (!converged) {
        throw FitError("error-model fit did not converge in 200 iterations (a=" + format_double(theta(1)) +
                       ", b=" + format_double(theta(3)) + ", c=" + format_double(theta(4)) + ")");
    }

    FitResult out;
    out.C1 = std::exp(theta(0));
    out.a = theta(1);
    out.C2 = std::exp(theta(2));
    out.b = theta(3);
    out.c = theta(4);
    out.residual = std::sqrt(cost / static_cast<double>(n));
    out.iterations = it + 1;
    out.cells_used = data.size();

    // standard errors of (b, c) from the Gauss-Newton covariance
    if (reliable && n > 5) {
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const double sigma2 = cost / static_cast<double>(n - 5);
        const Eigen::MatrixXd cov = sigma2 * JtJ.completeOrthogonalDecomposition().pseudoInverse();
        const double sb = std::sqrt(std::max(cov(3, 3), 0.0));
        const double sc = std::sqrt(std::max(cov(4, 4), 0.0));
        reliable = std::isfinite(sb) && std::isfinite(sc) && sb < 0.5 && sc < 0.5;
    }
    out.h_term_reliable = reliable;
    if (!std::isfinite(out.residual)) throw FitError("error-model fit produced a non-finite residual");
    return out;
}

} // namespace kpde
