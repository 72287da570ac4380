#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smallball/curves.hpp"
#include "smallball/ensembles.hpp"
#include "smallball/functional.hpp"

namespace smallball {

struct Experiment {
    std::string name;
    EnsembleSpec ensemble;
    Functional functional = Functional::DetRootN;
    /// Strictly increasing, nonnegative thresholds.
    std::vector<double> t_grid;
    std::uint64_t samples = 100000;
    std::uint64_t master_seed = 1;
    double confidence = 0.99;
    /// Size of the independent pre-pass estimating E||A+T||.
    std::uint64_t expected_norm_samples = 10000;
    int permanent_cap = 20;
};

/// `points` thresholds from lo to hi, log-spaced (or linear).
std::vector<double> make_t_grid(double lo, double hi, int points, bool log_spaced = true);

struct EngineOptions {
    /// <= 0 selects std::thread::hardware_concurrency().
    int workers = 0;
    /// Polled between work chunks; set to abandon the run.
    const std::atomic<bool>* cancel = nullptr;
};

class Cancelled : public std::runtime_error {
  public:
    Cancelled() : std::runtime_error("run cancelled") {}
};

struct EstimationResult {
    double t;
    std::uint64_t hits;
    std::uint64_t n_samples;
    double p_hat;
    double ci_low;
    double ci_high;
};

/// Per-sample functional values in comparison space: log|det|/n (resp.
/// log|perm|/n) for the root-n functionals, the plain value otherwise.
/// values[i] belongs to sample index i.
std::vector<double> functional_values(const Experiment& e, const EngineOptions& opts = {});

/// Whether a comparison-space value counts as a hit at threshold t.
bool is_hit(Functional f, double value, double t);

/// Draws the sample set once and counts hits for every threshold, with
/// exact Clopper-Pearson intervals at e.confidence.
std::vector<EstimationResult> run_experiment(const Experiment& e, const EngineOptions& opts = {});

struct NormEstimate {
    double mean;
    double std_error;
    std::uint64_t samples;
    std::uint64_t seed;
};

inline constexpr std::uint64_t kNormPrepassTag = 0x6e6f726d2d707265ull; // "norm-pre"

/// Sample mean of ||A+T|| over a pre-pass whose seed is derived from, and
/// disjoint from, the experiment's master seed.
NormEstimate estimate_expected_norm(const Experiment& e, const EngineOptions& opts = {});

enum class Verdict { Pass, Violation, ResolutionLimited };
std::string_view to_string(Verdict v);

struct VerificationRow {
    EstimationResult estimate;
    double bound;
    double bound_clamped;
    Verdict verdict;
};

struct VerificationReport {
    std::string experiment;
    std::string curve;
    std::string formula;
    std::vector<VerificationRow> rows;
    int violations = 0;
    double max_ratio = 0.0;
    std::optional<NormEstimate> expected_norm;
};

/// Below this many hits a passing row is reported as resolution-limited.
inline constexpr std::uint64_t kResolutionHits = 10;

/// Pairs precomputed estimates with a curve. VIOLATION iff ci_low exceeds
/// the clamped bound. Rejects curves that do not fit the experiment (see
/// verify_bound).
VerificationReport compare_with_curve(const Experiment& e, const std::vector<EstimationResult>& estimates,
                                      const BoundCurve& curve);

/// VIOLATION iff ci_low exceeds the clamped bound. Rejects a curve whose b
/// differs from the ensemble's b_max, whose n differs from the ensemble's,
/// or which bounds a different functional.
VerificationReport verify_bound(const Experiment& e, const BoundCurve& curve, const EngineOptions& opts = {});

/// Builds the named curve from the ensemble (n, b_max, and a pre-pass
/// expected norm when the curve needs one) and verifies it.
VerificationReport verify_named_curve(const Experiment& e, const std::string& curve_name,
                                      const EngineOptions& opts = {}, std::optional<double> beta = std::nullopt);

/// Curve for an experiment: n and b from the ensemble, plus the pre-pass
/// norm estimate when the curve needs one (returned through `norm`).
BoundCurve curve_for_experiment(const Experiment& e, const std::string& curve_name, const EngineOptions& opts,
                                std::optional<double> beta, std::optional<NormEstimate>& norm);

} // namespace smallball
