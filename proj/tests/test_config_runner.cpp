#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smallball/config.hpp"
#include "smallball/runner.hpp"

using namespace smallball;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("smallball-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kUniform1x1 = R"({
  "seed": 17,
  "experiments": [{
    "name": "uniform1",
    "ensemble": {"n": 1, "diagonal": "uniform:0,1"},
    "functional": "det_root_n",
    "curves": ["det"],
    "t_grid": {"min": 0.01, "max": 0.1, "points": 4},
    "samples": 100000
  }]
})";

} // namespace

TEST_CASE("parse a complete config") {
    const auto cfg = parse_config(R"({
      "output_dir": "out", "workers": 3, "seed": 5,
      "experiments": [{
        "name": "g10",
        "ensemble": {"n": 3,
                     "diagonal": [{"kind": "gaussian", "mu": 0, "sigma": 1}],
                     "offdiag": {"policy": "symmetric_iid", "law": "gaussian:0,1"},
                     "shift": {"fill": 1}},
        "functional": "s_min",
        "curves": ["sn_closed", {"name": "sn_raw", "beta": 2.5}],
        "t_grid": [0.001, 0.01, 0.1],
        "samples": 1000, "confidence": 0.95, "expected_norm_samples": 500
      }]
    })");
    REQUIRE(cfg.experiments.size() == 1);
    CHECK(cfg.output_dir == fs::path("out"));
    CHECK(cfg.workers == 3);
    const auto& ec = cfg.experiments[0];
    CHECK(ec.experiment.master_seed == 5);
    CHECK(ec.experiment.functional == Functional::SMin);
    CHECK(ec.experiment.t_grid.size() == 3);
    CHECK(ec.experiment.confidence == 0.95);
    CHECK(ec.experiment.ensemble.symmetric());
    REQUIRE(ec.curves.size() == 2);
    CHECK(ec.curves[1].beta == 2.5);
}

TEST_CASE("schema errors carry field paths") {
    auto path_of = [](const std::string& text) -> std::string {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.path();
        }
        return "<none>";
    };
    const std::string head = R"({"seed": 1, "experiments": [{"name": "x", "ensemble": {"n": 2, "diagonal": "uniform:0,1"}, )";
    CHECK(path_of(head + R"("t_grid": [0.1], "curves": ["foo"]}]})").find("experiments[0].curves[0]") !=
          std::string::npos);
    CHECK(path_of(head + R"("t_grid": [0.1], "colour": 1}]})").find("experiments[0].colour") != std::string::npos);
    CHECK(path_of(head + R"("t_grid": {"min": 0.1, "max": 1, "points": 3, "log": "yes"}}]})")
              .find("t_grid.log") != std::string::npos);
    CHECK(path_of(R"({"seed": 1, "experiments": [{"name": "x", "t_grid": [0.1],
        "ensemble": {"n": 2, "diagonal": {"kind": "uniform", "a": 1, "c": 0}}}]})")
              .find("ensemble.diagonal") != std::string::npos);
    CHECK(path_of(head + R"("t_grid": [0.1], "functional": "s_min", "curves": ["det"]}]})")
              .find("curves[0]") != std::string::npos);
    CHECK(path_of("{not json") == "$");
}

TEST_CASE("shift matrix from a CSV file") {
    const auto dir = scratch("csv");
    {
        std::ofstream(dir / "shift.csv") << "1,2\n3,4\n";
    }
    const auto cfg = parse_config(R"({"seed": 1, "experiments": [{"name": "s", "t_grid": [0.1],
        "ensemble": {"n": 2, "diagonal": "uniform:0,1", "shift": "shift.csv"}}]})",
                                  dir);
    const auto& shift = cfg.experiments[0].experiment.ensemble.shift();
    REQUIRE(shift);
    CHECK((*shift)(1, 0) == 3.0);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1, "experiments": [{"name": "s", "t_grid": [0.1],
        "ensemble": {"n": 3, "diagonal": "uniform:0,1", "shift": "shift.csv"}}]})",
                                 dir),
                    ConfigError);
}

TEST_CASE("run: 1x1 uniform passes with p_hat close to t") {
    const auto dir = scratch("ok");
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = dir;
    opts.workers = 2;
    opts.log = &log;
    CHECK(run(parse_config(kUniform1x1), opts) == kExitOk);
    const auto table = slurp(dir / "uniform1.det.csv");
    CHECK(table.find("VIOLATION") == std::string::npos);
    CHECK(table.find("# seed=17") != std::string::npos);
    CHECK(fs::exists(dir / "uniform1.estimate.csv"));
    CHECK(slurp(dir / "summary.csv").find("uniform1,det,0,") != std::string::npos);
}

TEST_CASE("run: bad config is exit 1 with a diagnostic") {
    const auto dir = scratch("bad");
    {
        std::ofstream(dir / "bad.json") << R"({"seed": 1, "experiments": [{"name": "x", "t_grid": [0.1],
            "ensemble": {"n": 1, "diagonal": "uniform:0,1"}, "curves": ["foo"]}]})";
    }
    std::ostringstream log;
    RunOptions opts;
    opts.log = &log;
    CHECK(run(dir / "bad.json", opts) == kExitError);
    CHECK(log.str().find("experiments[0].curves[0]") != std::string::npos);
    CHECK(run(dir / "missing.json", opts) == kExitError);
}

TEST_CASE("run: a tight bound at negligible confidence trips a violation, exit 2") {
    // For uniform(-1,1), b = 1/2 and P[|x| <= t] = t equals the det bound
    // exactly. At 1% confidence the interval is essentially the point
    // estimate, so about half the rows land above the bound.
    const auto dir = scratch("violation");
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = dir;
    opts.workers = 1;
    opts.log = &log;
    const auto cfg = parse_config(R"({"seed": 3, "experiments": [{"name": "tight",
        "ensemble": {"n": 1, "diagonal": "uniform:-1,1"}, "curves": ["det"], "confidence": 0.01,
        "t_grid": {"min": 0.05, "max": 0.9, "points": 24, "log": false}, "samples": 20000}]})");
    CHECK(run(cfg, opts) == kExitViolation);
    CHECK(slurp(dir / "tight.det.csv").find("VIOLATION") != std::string::npos);
}

TEST_CASE("run: CSV output is byte-identical across worker counts") {
    const char* text = R"({"seed": 42, "experiments": [
      {"name": "g4", "ensemble": {"n": 4, "diagonal": "gaussian:0,1",
        "offdiag": {"policy": "rank_one", "law": "uniform:-1,1"}},
       "curves": ["det", "schedule"], "t_grid": {"min": 0.001, "max": 0.1, "points": 6}, "samples": 3000},
      {"name": "sym", "ensemble": {"n": 3, "diagonal": "uniform:0,1",
        "offdiag": {"policy": "symmetric_iid", "law": "gaussian:0,1"}},
       "functional": "s_min", "curves": ["sn_closed", "sn_raw"], "expected_norm_samples": 300,
       "t_grid": [0.01, 0.1], "samples": 2000}]})";
    const auto cfg = parse_config(text);
    std::vector<fs::path> dirs;
    for (int w : {1, 4, 16}) {
        dirs.push_back(scratch("repro" + std::to_string(w)));
        std::ostringstream log;
        RunOptions opts;
        opts.out_dir = dirs.back();
        opts.workers = w;
        opts.log = &log;
        CHECK(run(cfg, opts) == kExitOk);
    }
    for (const char* f : {"g4.estimate.csv", "g4.det.csv", "g4.schedule.csv", "sym.sn_closed.csv",
                          "sym.sn_raw.csv", "summary.csv"}) {
        CAPTURE(f);
        const auto ref = slurp(dirs[0] / f);
        CHECK(!ref.empty());
        CHECK(slurp(dirs[1] / f) == ref);
        CHECK(slurp(dirs[2] / f) == ref);
    }
}

TEST_CASE("worker count precedence") {
    CHECK(resolve_worker_count(7) == 7);
    ::setenv("SMALLBALL_WORKERS", "5", 1);
    CHECK(resolve_worker_count(std::nullopt) == 5);
    CHECK(resolve_worker_count(2) == 2);
    ::setenv("SMALLBALL_WORKERS", "junk", 1);
    CHECK(resolve_worker_count(std::nullopt) >= 1);
    ::unsetenv("SMALLBALL_WORKERS");
}

TEST_CASE("seed override and experiment filter") {
    const auto dir = scratch("filter");
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = dir;
    opts.seed = 99;
    opts.workers = 1;
    opts.log = &log;
    opts.estimate_only = true;
    CHECK(run(parse_config(kUniform1x1), opts) == kExitOk);
    CHECK(slurp(dir / "uniform1.estimate.csv").find("# seed=99") != std::string::npos);
    CHECK(!fs::exists(dir / "uniform1.det.csv"));
    opts.experiment = "nope";
    CHECK(run(parse_config(kUniform1x1), opts) == kExitError);
}
