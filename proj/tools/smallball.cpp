// smallball: small-ball probability bounds for random matrices with
// independent continuous diagonals, Monte Carlo estimates, and verification.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smallball/bounds.hpp"
#include "smallball/curves.hpp"
#include "smallball/density_calculus.hpp"
#include "smallball/mc_engine.hpp"
#include "smallball/report.hpp"
#include "smallball/runner.hpp"
#include "smallball/svg_plot.hpp"

namespace {

std::atomic<bool> g_cancel{false};

void on_sigint(int) { g_cancel = true; }

struct GridArgs {
    std::optional<double> value;
    std::optional<double> lo, hi;
    int points = 16;
    bool linear = false;

    std::vector<double> grid(const char* what) const {
        if (value) return {*value};
        if (!lo || !hi) throw std::invalid_argument(std::string("give --") + what + " or --" + what + "min/--" + what + "max");
        return smallball::make_t_grid(*lo, *hi, points, !linear);
    }
};

void add_grid(CLI::App* cmd, GridArgs& g, const std::string& var) {
    cmd->add_option("--" + var, g.value, "single value");
    cmd->add_option("--" + var + "min", g.lo, "grid start");
    cmd->add_option("--" + var + "max", g.hi, "grid end");
    cmd->add_option("--points", g.points, "grid size")->check(CLI::PositiveNumber);
    cmd->add_flag("--linear", g.linear, "linear instead of log spacing");
}

} // namespace

int main(int argc, char** argv) {
    using namespace smallball;

    CLI::App app{"smallball - small-ball probability bounds and Monte Carlo verification"};
    app.require_subcommand(1);

    // run / estimate / verify share the config flags
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir, experiment, curve_filter;
    auto add_config_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--seed", seed, "master seed, overrides the config");
        cmd->add_option("--workers", workers, "worker threads (fallback: SMALLBALL_WORKERS)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--experiment", experiment, "only run this experiment");
    };
    auto* run_cmd = app.add_subcommand("run", "run every experiment and verify its curves");
    add_config_flags(run_cmd);
    auto* estimate_cmd = app.add_subcommand("estimate", "estimate probabilities only, no curves");
    add_config_flags(estimate_cmd);
    auto* verify_cmd = app.add_subcommand("verify", "estimate and verify against bound curves");
    add_config_flags(verify_cmd);
    verify_cmd->add_option("--curve", curve_filter, "only verify this curve");

    // bound
    std::string bound_name;
    CurveParams bound_params;
    GridArgs bound_grid;
    double expected_norm = 0;
    double beta = 0;
    auto* bound_cmd = app.add_subcommand("bound", "evaluate a bound curve");
    bound_cmd->add_option("curve", bound_name, "curve name")->required()->check(CLI::IsMember(curve_names()));
    bound_cmd->add_option("--n", bound_params.n, "matrix dimension")->check(CLI::PositiveNumber);
    bound_cmd->add_option("--b", bound_params.b, "density supremum");
    bound_cmd->add_option("--expected-norm", expected_norm, "E||T|| for sn_closed / sn_raw");
    bound_cmd->add_option("--beta", beta, "fixed beta for sn_raw (default: optimized)");
    add_grid(bound_cmd, bound_grid, "t");

    // density
    std::string law_x, law_y;
    GridArgs z_grid;
    std::optional<double> smallball_t;
    double gamma = 0;
    QuadratureOptions quad;
    auto* density_cmd = app.add_subcommand("density", "density of X*Y and its envelope");
    density_cmd->add_option("--x", law_x, "law of X, e.g. uniform:0,1")->required();
    density_cmd->add_option("--y", law_y, "law of Y, e.g. gaussian:0,1")->required();
    add_grid(density_cmd, z_grid, "z");
    density_cmd->add_option("--smallball", smallball_t, "print P[|XY + gamma| < t] for this t");
    density_cmd->add_option("--gamma", gamma, "shift for --smallball");
    density_cmd->add_option("--abs-tol", quad.abs_tol, "absolute quadrature tolerance");
    density_cmd->add_option("--rel-tol", quad.rel_tol, "relative quadrature tolerance");

    // schedule
    int sched_n = 1;
    double tau = 0, sched_b = 1.0;
    std::vector<double> eps;
    auto* schedule_cmd = app.add_subcommand("schedule", "evaluate / compare epsilon schedules");
    schedule_cmd->add_option("--n", sched_n, "matrix dimension")->check(CLI::PositiveNumber);
    schedule_cmd->add_option("--tau", tau, "final epsilon of the geometric schedule");
    schedule_cmd->add_option("--b", sched_b, "density supremum");
    schedule_cmd->add_option("--eps", eps, "custom schedule to compare")->delimiter(',');

    // plot
    std::vector<std::string> plot_inputs;
    std::optional<std::string> plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "render report CSVs to SVG");
    plot_cmd->add_option("csv", plot_inputs, "report CSV files")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--out", plot_out, "output file (single input) or directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitError;
    }

    try {
        if (run_cmd->parsed() || estimate_cmd->parsed() || verify_cmd->parsed()) {
            std::signal(SIGINT, on_sigint);
            RunOptions opts;
            opts.seed = seed;
            opts.workers = workers;
            if (out_dir) opts.out_dir = *out_dir;
            opts.experiment = experiment;
            opts.curve = curve_filter;
            opts.estimate_only = estimate_cmd->parsed();
            opts.cancel = &g_cancel;
            return run(config_path, opts);
        }

        if (bound_cmd->parsed()) {
            if (expected_norm > 0) bound_params.expected_norm = expected_norm;
            if (beta > 0) bound_params.beta = beta;
            const auto curve = make_curve(bound_name, bound_params);
            const auto ts = bound_grid.grid("t");
            if (ts.size() == 1) {
                std::cout << format_double(curve(ts[0])) << '\n';
            } else {
                std::cout << "# curve=" << curve.name << "\n# formula=" << curve.formula << '\n'
                          << "t,bound,bound_clamped\n";
                for (double t : ts)
                    std::cout << format_double(t) << ',' << format_double(curve(t)) << ','
                              << format_double(curve.clamped(t)) << '\n';
            }
            return kExitOk;
        }

        if (density_cmd->parsed()) {
            const auto dx = parse_distribution(law_x), dy = parse_distribution(law_y);
            if (smallball_t) {
                std::cout << format_double(smallball_from_density(dx, dy, gamma, *smallball_t, quad)) << '\n';
                return kExitOk;
            }
            const auto zs = z_grid.grid("z");
            const double b = std::max(dx.density_sup(), dy.density_sup());
            if (zs.size() == 1) {
                std::cout << format_double(product_density({dx, dy, zs[0], quad})) << '\n';
                return kExitOk;
            }
            std::cout << "# x=" << dx.describe() << "\n# y=" << dy.describe() << "\n# b=" << format_double(b)
                      << "\nz,density,envelope\n";
            for (double z : zs)
                std::cout << format_double(z) << ',' << format_double(product_density({dx, dy, z, quad})) << ','
                          << format_double(product_density_envelope(b, z)) << '\n';
            return kExitOk;
        }

        if (schedule_cmd->parsed()) {
            if (tau > 0) {
                const auto g = geometric_schedule(sched_n, tau);
                std::cout << "geometric:";
                for (double e : g) std::cout << ' ' << format_double(e);
                std::cout << "\nbound: " << format_double(schedule_bound<double>(sched_b, g)) << '\n';
            }
            if (!eps.empty()) {
                std::cout << "custom:";
                for (double e : eps) std::cout << ' ' << format_double(e);
                std::cout << "\nbound: " << format_double(schedule_bound<double>(sched_b, eps)) << '\n';
            }
            if (!(tau > 0) && eps.empty()) throw std::invalid_argument("give --tau and/or --eps");
            return kExitOk;
        }

        if (plot_cmd->parsed()) {
            for (const auto& in : plot_inputs) {
                const std::filesystem::path src(in);
                std::filesystem::path dst = src;
                dst.replace_extension(".svg");
                if (plot_out) {
                    const std::filesystem::path o(*plot_out);
                    dst = (plot_inputs.size() == 1 && o.extension() == ".svg") ? o : o / dst.filename();
                    if (dst.has_parent_path()) std::filesystem::create_directories(dst.parent_path());
                }
                std::ofstream out(dst);
                out << render_svg(read_csv_table(src), src.stem().string());
                if (!out) throw std::runtime_error("cannot write " + dst.string());
                std::cout << dst.string() << '\n';
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
