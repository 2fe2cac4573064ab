#include "kpde/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kpde/errors.hpp"
#include "kpde/format.hpp"
#include "kpde/kernel.hpp"
#include "kpde/problems.hpp"
#include "kpde/quasi_interp.hpp"
#include "kpde/semidiscrete.hpp"
#include "kpde/study.hpp"

namespace kpde {

namespace {

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

struct RunArgs {
    std::string problem = "burgers-a";
    int nu_h = -10;
    int nu_eps = -6;
    std::optional<int> order;
    std::optional<int> smoothness;
    double t_final = 0.5;
    std::optional<double> cfl;
    std::optional<double> dt;
    std::string out;
    std::vector<double> snapshots;
    int jobs = 1;
};

int do_run(const RunArgs& a, std::ostream& out) {
    const auto problem = parse_problem(a.problem, a.t_final);
    SolverConfig cfg;
    cfg.h = std::ldexp(1.0, a.nu_h);
    cfg.epsilon = std::ldexp(1.0, a.nu_eps);
    cfg.kernel = a.problem == "burgers-b" ? KernelSpec{2, 2, 1} : KernelSpec{4, 4, 1};
    if (a.order) cfg.kernel.order = *a.order;
    if (a.smoothness) cfg.kernel.smoothness = *a.smoothness;
    cfg.t_final = a.t_final;
    if (a.cfl)
        cfg.cfl = *a.cfl;
    else if (a.problem == "burgers-a" || a.problem == "burgers-b")
        cfg.cfl = SeriesSpec::of(a.problem == "burgers-a" ? Series::A : Series::B).cfl;
    cfg.dt = a.dt;
    cfg.jobs = a.jobs;
    cfg.snapshot_times = a.snapshots;

    const auto result = solve(problem, cfg);
    const auto stencil = make_stencil(ScaledKernel(make_kernel(cfg.kernel), cfg.epsilon), cfg.h);
    out << "problem " << problem.name << "\n";
    out << "h 2^" << a.nu_h << "  eps 2^" << a.nu_eps << "  kernel eta^{" << cfg.kernel.order << ','
        << cfg.kernel.smoothness << "}\n";
    out << "steps " << result.step_count << "  dt " << sci(cfg.step()) << "  t_final "
        << format_double(result.final_state.time) << "\n";
    if (problem.exact_solution) {
        const double T = result.final_state.time;
        const double err = linf_grid_error(result.final_state, stencil,
                                           [&](const Vec& x) { return problem.exact_solution(T, x); },
                                           ErrorMode::quasi_interpolant);
        out << "linf_error " << sci(err) << "\n";
    }
    out << "wall_time " << sci(result.wall_time) << " s\n";

    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw ConfigError("cannot write " + a.out);
        write_csv(f, result.final_state);
        const std::filesystem::path base(a.out);
        for (const auto& snap : result.snapshots) {
            auto p = base;
            p.replace_filename(base.stem().string() + "_t" + format_double(snap.time) + base.extension().string());
            std::ofstream s(p);
            if (!s) throw ConfigError("cannot write " + p.string());
            write_csv(s, snap);
        }
    }
    return 0;
}

struct TableArgs {
    std::string series = "A";
    std::string nu_h = "-9..-13";
    std::string nu_eps = "-6..-9";
    std::string out;
    std::optional<double> cfl;
    std::optional<double> dt;
    int jobs = 1;
    bool quiet = false;
};

int do_table(const TableArgs& a, std::ostream& out, std::ostream& err) {
    const auto series = parse_series(a.series);
    TableOptions opts;
    opts.run.cfl = a.cfl;
    opts.run.dt = a.dt;
    opts.jobs = a.jobs;
    if (!a.quiet) {
        opts.progress = [&err](int r, int c, std::optional<double> e) {
            err << "cell nu_h=" << r << " nu_eps=" << c << ": " << (e ? sci(*e) : std::string("failed"))
                << std::endl;
        };
    }
    const auto table = run_table(series, parse_range(a.nu_h), parse_range(a.nu_eps), opts);
    if (a.out.empty()) {
        write_table_csv(out, table);
    } else {
        std::ofstream f(a.out);
        if (!f) throw ConfigError("cannot write " + a.out);
        write_table_csv(f, table);
        out << "series " << series_letter(series) << " discrete L_inf errors\n" << render_table(table);
    }
    return 0;
}

int do_fit(const std::string& input, std::ostream& out) {
    std::ifstream f(input);
    if (!f) throw ConfigError("cannot read " + input);
    const auto table = read_table_csv(f);
    out << render_table(table);
    try {
        const auto eps = fit_eps_regime(table);
        out << "eps regime: C1 " << sci(eps.C1) << "  a " << format_double(std::round(eps.a * 1000) / 1000)
            << "  (" << eps.columns << " plateau columns)\n";
    } catch (const FitError& e) {
        out << "eps regime: " << e.what() << "\n";
    }
    const auto fit = fit_error_model(table);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "model: %.4g eps^%.3f + %.4g h^%.3f / eps^%.3f\nresidual (rms log) %.4f  cells %zu  "
                  "iterations %d\n",
                  fit.C1, fit.a, fit.C2, fit.b, fit.c, fit.residual, fit.cells_used, fit.iterations);
    out << buf;
    if (!fit.h_term_reliable) out << "warning: h-term exponents (b, c) are poorly constrained by this table\n";
    return 0;
}

struct KernelArgs {
    int order = 4;
    int smoothness = 4;
    int dim = 1;
    std::string spec;
    bool check = false;
};

int do_kernel(const KernelArgs& a, std::ostream& out) {
    const auto kernel = a.spec.empty() ? make_kernel({a.order, a.smoothness, a.dim}) : parse_kernel_spec(a.spec);
    out << "kernel order " << kernel.order() << ", smoothness C^" << kernel.smoothness() << ", dim "
        << kernel.dim() << "\n";
    for (std::size_t j = 0; j < kernel.nodes().size(); ++j)
        out << "  a_" << j << " = " << format_double(kernel.nodes()[j]) << "  lambda_" << j << " = "
            << format_double(kernel.weights()[j]) << "\n";
    if (!a.check) return 0;

    const double target0 = 1.0 / sphere_area(kernel.dim());
    constexpr double tol = 1e-10;
    bool ok = true;
    out << "moment  value                   target    |deviation|\n";
    for (int i = 0; i < kernel.order() / 2; ++i) {
        const double m = kernel_moment(kernel, i);
        const double target = i == 0 ? target0 : 0.0;
        const double dev = std::abs(m - target);
        ok = ok && dev <= tol;
        char buf[160];
        std::snprintf(buf, sizeof buf, "i=%-4d  %-22.15g  %-8.6g  %.3e %s\n", i, m, target, dev,
                      dev <= tol ? "ok" : "FAIL");
        out << buf;
    }
    out << (ok ? "moment conditions satisfied\n" : "moment conditions violated\n");
    return ok ? 0 : kNumerical;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel-based meshfree solver for first-order evolution equations"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "single solve with error against the exact solution");
    run_cmd->add_option("--problem", run.problem, "burgers-a | burgers-b | transport:<u>");
    run_cmd->add_option("--nu-h", run.nu_h, "h = 2^nu_h");
    run_cmd->add_option("--nu-eps", run.nu_eps, "eps = 2^nu_eps");
    run_cmd->add_option("--kernel-order", run.order);
    run_cmd->add_option("--kernel-smoothness", run.smoothness);
    run_cmd->add_option("--t-final", run.t_final);
    run_cmd->add_option("--cfl", run.cfl, "dt = cfl * eps (default 0.05 for burgers-a, else 0.1)");
    run_cmd->add_option("--dt", run.dt, "explicit time step (overrides --cfl)");
    run_cmd->add_option("--out", run.out, "final coefficients as CSV index,x,value");
    run_cmd->add_option("--snapshots", run.snapshots, "times to also dump (needs --out)")->delimiter(',');
    run_cmd->add_option("--jobs", run.jobs);

    TableArgs table;
    auto* table_cmd = app.add_subcommand("table", "convergence table over (nu_h, nu_eps)");
    table_cmd->add_option("--series", table.series, "A or B");
    table_cmd->add_option("--nu-h-range", table.nu_h, "lo..hi");
    table_cmd->add_option("--nu-eps-range", table.nu_eps, "lo..hi");
    table_cmd->add_option("--out", table.out, "CSV path (stdout if omitted)");
    table_cmd->add_option("--cfl", table.cfl, "dt = cfl * eps (default: per series)");
    table_cmd->add_option("--dt", table.dt);
    table_cmd->add_option("--jobs", table.jobs, "cells computed concurrently");
    table_cmd->add_flag("--quiet", table.quiet, "no per-cell progress on stderr");

    std::string fit_input;
    auto* fit_cmd = app.add_subcommand("fit", "least-squares fit of C1 eps^a + C2 h^b / eps^c");
    fit_cmd->add_option("--input", fit_input, "table CSV")->required();

    KernelArgs kernel;
    auto* kernel_cmd = app.add_subcommand("kernel", "kernel coefficients and moment diagnostics");
    kernel_cmd->add_option("--order", kernel.order);
    kernel_cmd->add_option("--smoothness", kernel.smoothness);
    kernel_cmd->add_option("--dim", kernel.dim);
    kernel_cmd->add_option("--spec", kernel.spec, "wendland:<n>:<k> or composite:<order>:<smoothness>:<n>");
    kernel_cmd->add_flag("--check-moments", kernel.check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*run_cmd) return do_run(run, out);
        if (*table_cmd) return do_table(table, out, err);
        if (*fit_cmd) return do_fit(fit_input, out);
        if (*kernel_cmd) return do_kernel(kernel, out);
    } catch (const BlowUpError& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    } catch (const FitError& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace kpde
