#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kpde/problems.hpp"

namespace kpde {

/// Discrete L_inf errors indexed by (nu_h, nu_eps) with h = 2^nu_h, eps = 2^nu_eps.
/// A cell is present only if h < eps and the run finished.
class ErrorTable {
public:
    ErrorTable() = default;
    ErrorTable(std::vector<int> nu_h, std::vector<int> nu_eps, std::string series = {});

    [[nodiscard]] const std::vector<int>& nu_h() const noexcept { return nu_h_; }
    [[nodiscard]] const std::vector<int>& nu_eps() const noexcept { return nu_eps_; }
    [[nodiscard]] const std::string& series() const noexcept { return series_; }

    /// Throws ConfigError if nu_h >= nu_eps.
    void set(int nu_h, int nu_eps, double error);
    [[nodiscard]] std::optional<double> get(int nu_h, int nu_eps) const;
    [[nodiscard]] std::size_t cell_count() const noexcept { return cells_.size(); }
    /// Present cells in row-major order (nu_h outer, as listed).
    [[nodiscard]] std::vector<std::tuple<int, int, double>> cells() const;

private:
    std::vector<int> nu_h_;
    std::vector<int> nu_eps_;
    std::string series_;
    std::map<std::pair<int, int>, double> cells_;
};

/// "lo..hi" in either order, e.g. "-9..-13" -> {-9, -10, ..., -13}; a lone integer is a
/// one-element range.
std::vector<int> parse_range(std::string_view text);

struct RunOptions {
    std::optional<double> dt;
    /// Unset: the series default.
    std::optional<double> cfl;
    /// Threads inside one solve.
    int jobs = 1;
};

/// max over the window sites of |[rho](T, x_i) - rho_exact(T, x_i)| for one series run.
/// Throws BlowUpError / ConfigError like solve().
double series_error(Series series, int nu_h, int nu_eps, const RunOptions& options = {});

struct TableOptions {
    RunOptions run;
    /// Cells computed concurrently (each solve single-threaded).
    int jobs = 1;
    /// Called after every cell: (nu_h, nu_eps, error or nullopt on failure).
    std::function<void(int, int, std::optional<double>)> progress;
};

/// Solves every admissible cell; failed cells stay absent.
ErrorTable run_table(Series series, const std::vector<int>& nu_h, const std::vector<int>& nu_eps,
                     const TableOptions& options = {});

/// CSV `nu_h,nu_eps,linf_error`, absent cells omitted, shortest round-trip numbers.
void write_table_csv(std::ostream& out, const ErrorTable& table);
ErrorTable read_table_csv(std::istream& in);

/// Rows nu_h, columns nu_eps, blanks for absent cells.
std::string render_table(const ErrorTable& table);

/// Error model C1 eps^a + C2 h^b / eps^c.
struct FitResult {
    double C1 = 0.0;
    double a = 0.0;
    double C2 = 0.0;
    double b = 0.0;
    double c = 0.0;
    /// root-mean-square of log(model) - log(error) over the fitted cells
    double residual = 0.0;
    int iterations = 0;
    std::size_t cells_used = 0;
    /// false when too few h-dominated cells constrain (C2, b, c)
    bool h_term_reliable = true;

    [[nodiscard]] double model(double h, double eps) const;
};

/// Damped Gauss-Newton on log errors. Starts from `a` fitted to column
/// plateaus and (b, c) fitted to the h-dominated cells. Throws FitError
/// with fewer than 8 cells or no convergence within 200 iterations.
FitResult fit_error_model(const ErrorTable& table);

/// Exponent a and constant C1 of the eps-only regime: least squares of
/// log(plateau) = log C1 + a log eps over stagnated columns.
struct EpsFit {
    double C1 = 0.0;
    double a = 0.0;
    std::size_t columns = 0;
};
EpsFit fit_eps_regime(const ErrorTable& table);

} // namespace kpde
