#include "smallball/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <iostream>
#include <thread>

#include "smallball/report.hpp"

namespace smallball {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

} // namespace

int resolve_worker_count(std::optional<int> requested) {
    if (requested && *requested > 0) return *requested;
    if (const char* env = std::getenv("SMALLBALL_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run(const RunConfig& config, const RunOptions& opts) {
    std::ostream& log = opts.log ? *opts.log : std::cerr;
    const auto out_dir = opts.out_dir.value_or(config.output_dir);
    const EngineOptions engine{resolve_worker_count(opts.workers ? opts.workers : config.workers), opts.cancel};

    std::vector<SummaryRow> summary;
    int violations = 0;
    auto flush_summary = [&] {
        std::ostringstream s;
        write_summary_csv(s, summary);
        write_file(out_dir / "summary.csv", s.str());
    };

    try {
        std::filesystem::create_directories(out_dir);
        bool matched = false;
        for (const auto& ec : config.experiments) {
            if (opts.experiment && ec.experiment.name != *opts.experiment) continue;
            matched = true;
            Experiment e = ec.experiment;
            if (opts.seed) e.master_seed = *opts.seed;

            log << "[" << e.name << "] n=" << e.ensemble.n() << " N=" << e.samples << " " << to_string(e.functional)
                << '\n';
            const auto estimates = run_experiment(e, engine);
            {
                std::ostringstream s;
                write_estimate_csv(s, e, estimates);
                write_file(out_dir / (e.name + ".estimate.csv"), s.str());
            }
            if (opts.estimate_only) continue;

            for (const auto& req : ec.curves) {
                if (opts.curve && req.name != *opts.curve) continue;
                std::optional<NormEstimate> norm;
                const auto curve = curve_for_experiment(e, req.name, engine, req.beta, norm);
                auto rep = compare_with_curve(e, estimates, curve);
                rep.expected_norm = norm;
                std::ostringstream s;
                write_verification_csv(s, e, rep);
                write_file(out_dir / (e.name + "." + req.name + ".csv"), s.str());
                summary.push_back({e.name, req.name, rep.violations, rep.max_ratio, rep.rows.size()});
                violations += rep.violations;
                log << "  " << req.name << ": " << (rep.violations ? "VIOLATION" : "PASS") << " ("
                    << rep.violations << " violating rows, max p_hat/bound " << format_double(rep.max_ratio) << ")\n";
            }
            flush_summary();
        }
        if (opts.experiment && !matched) {
            log << "error: no experiment named '" << *opts.experiment << "'\n";
            return kExitError;
        }
        flush_summary();
    } catch (const Cancelled&) {
        log << "interrupted; partial results flushed to " << out_dir.string() << '\n';
        try {
            flush_summary();
        } catch (...) {
        }
        return kExitError;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << '\n';
        return kExitError;
    }
    return violations ? kExitViolation : kExitOk;
}

int run(const std::filesystem::path& config_path, const RunOptions& opts) {
    std::ostream& log = opts.log ? *opts.log : std::cerr;
    try {
        return run(load_config(config_path), opts);
    } catch (const ConfigError& e) {
        log << "config error at " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitError;
    }
}

} // namespace smallball
