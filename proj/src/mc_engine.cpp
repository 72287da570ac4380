#include "smallball/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "smallball/clopper_pearson.hpp"
#include "smallball/matrix_probes.hpp"

namespace smallball {

namespace {

constexpr std::uint64_t kChunk = 256;

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Calls body(index, scratch) for every index in [0, count); each worker owns
// one scratch matrix. Output placement is by index, so results do not depend
// on the number of workers.
template <class Body>
void parallel_over_samples(std::uint64_t count, const EngineOptions& opts, Body body) {
    const int workers = static_cast<int>(std::min<std::uint64_t>(resolve_workers(opts.workers), (count + kChunk - 1) / kChunk));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<bool> stop{false};

    auto work = [&] {
        Eigen::MatrixXd scratch;
        try {
            for (;;) {
                if (stop.load(std::memory_order_relaxed)) return;
                if (opts.cancel && opts.cancel->load(std::memory_order_relaxed)) throw Cancelled();
                const std::uint64_t begin = next.fetch_add(kChunk);
                if (begin >= count) return;
                const std::uint64_t end = std::min(count, begin + kChunk);
                for (std::uint64_t i = begin; i < end; ++i) body(i, scratch);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            stop = true;
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
}

double evaluate(Functional f, const Eigen::MatrixXd& m, int permanent_cap) {
    const double n = static_cast<double>(m.rows());
    switch (f) {
    case Functional::DetRootN: return log_abs_det(m).log_abs_det / n;
    case Functional::SMin: return smallest_singular_value(m);
    case Functional::OperatorNorm: return operator_norm(m);
    case Functional::PermanentRootN: {
        const double p = permanent(m, permanent_cap);
        return p == 0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(p)) / n;
    }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

bool log_space(Functional f) { return f == Functional::DetRootN || f == Functional::PermanentRootN; }

void validate(const Experiment& e) {
    if (e.samples == 0) throw std::invalid_argument("experiment '" + e.name + "': samples must be >= 1");
    if (!(e.confidence > 0 && e.confidence < 1))
        throw std::invalid_argument("experiment '" + e.name + "': confidence must lie in (0,1)");
    for (std::size_t i = 0; i < e.t_grid.size(); ++i) {
        if (!(e.t_grid[i] >= 0 && std::isfinite(e.t_grid[i])))
            throw std::invalid_argument("experiment '" + e.name + "': thresholds must be finite and >= 0");
        if (i && !(e.t_grid[i] > e.t_grid[i - 1]))
            throw std::invalid_argument("experiment '" + e.name + "': t_grid must be strictly increasing");
    }
    if (e.functional == Functional::PermanentRootN && e.ensemble.n() > e.permanent_cap)
        throw std::invalid_argument("experiment '" + e.name + "': n = " + std::to_string(e.ensemble.n()) +
                                    " exceeds the permanent cap " + std::to_string(e.permanent_cap));
}

} // namespace

std::vector<double> make_t_grid(double lo, double hi, int points, bool log_spaced) {
    if (points < 1) throw std::invalid_argument("t grid needs at least one point");
    if (!(lo <= hi) || (points > 1 && !(lo < hi))) throw std::invalid_argument("t grid needs min < max");
    if (log_spaced && !(lo > 0)) throw std::invalid_argument("log-spaced t grid needs min > 0");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        g[static_cast<std::size_t>(i)] = log_spaced ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                                    : lo + f * (hi - lo);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

bool is_hit(Functional f, double value, double t) {
    if (log_space(f)) {
        if (value == -std::numeric_limits<double>::infinity()) return true;
        return t > 0 && value <= std::log(t);
    }
    return value <= t;
}

std::vector<double> functional_values(const Experiment& e, const EngineOptions& opts) {
    validate(e);
    std::vector<double> values(e.samples);
    parallel_over_samples(e.samples, opts, [&](std::uint64_t i, Eigen::MatrixXd& m) {
        sample_into(e.ensemble, e.master_seed, i, m);
        const double v = evaluate(e.functional, m, e.permanent_cap);
        if (std::isnan(v)) throw std::runtime_error("functional evaluated to NaN at sample " + std::to_string(i));
        values[i] = v;
    });
    return values;
}

std::vector<EstimationResult> run_experiment(const Experiment& e, const EngineOptions& opts) {
    auto values = functional_values(e, opts);
    std::sort(values.begin(), values.end());
    std::vector<EstimationResult> out;
    out.reserve(e.t_grid.size());
    for (double t : e.t_grid) {
        // values sorted ascending, and hits form a prefix for every t.
        const auto it = std::partition_point(values.begin(), values.end(),
                                             [&](double v) { return is_hit(e.functional, v, t); });
        const auto hits = static_cast<std::uint64_t>(it - values.begin());
        const auto ci = clopper_pearson(hits, e.samples, e.confidence);
        out.push_back({t, hits, e.samples, static_cast<double>(hits) / static_cast<double>(e.samples), ci.low, ci.high});
    }
    return out;
}

NormEstimate estimate_expected_norm(const Experiment& e, const EngineOptions& opts) {
    if (e.expected_norm_samples < 2) throw std::invalid_argument("expected-norm pre-pass needs >= 2 samples");
    const std::uint64_t seed = derive_seed(e.master_seed, kNormPrepassTag);
    std::vector<double> norms(e.expected_norm_samples);
    parallel_over_samples(e.expected_norm_samples, opts, [&](std::uint64_t i, Eigen::MatrixXd& m) {
        sample_into(e.ensemble, seed, i, m);
        norms[i] = operator_norm(m);
    });
    const Eigen::Map<const Eigen::VectorXd> v(norms.data(), static_cast<Eigen::Index>(norms.size()));
    const double mean = v.mean();
    const double var = (v.array() - mean).square().sum() / static_cast<double>(norms.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(norms.size())), e.expected_norm_samples, seed};
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Violation: return "VIOLATION";
    case Verdict::ResolutionLimited: return "RESOLUTION_LIMITED";
    }
    return "?";
}

VerificationReport compare_with_curve(const Experiment& e, const std::vector<EstimationResult>& estimates,
                                      const BoundCurve& curve) {
    const auto target = curve_functional(curve.name);
    if (!target) throw std::invalid_argument("curve '" + curve.name + "' is not a bound on a matrix functional");
    if (*target != e.functional)
        throw std::invalid_argument("curve '" + curve.name + "' bounds " + std::string(to_string(*target)) +
                                    ", experiment measures " + std::string(to_string(e.functional)));
    const double b = e.ensemble.b_max();
    if (std::abs(curve.params.b - b) > 1e-12 * b)
        throw std::invalid_argument("curve b = " + std::to_string(curve.params.b) +
                                    " does not match the ensemble's density supremum " + std::to_string(b));
    if (curve.params.n != e.ensemble.n())
        throw std::invalid_argument("curve n does not match the ensemble dimension");

    VerificationReport rep{e.name, curve.name, curve.formula, {}, 0, 0.0, std::nullopt};
    for (const auto& est : estimates) {
        const double bound = curve(est.t);
        const double clamped = curve.clamped(est.t);
        Verdict v = Verdict::Pass;
        if (est.ci_low > clamped)
            v = Verdict::Violation;
        else if (est.hits < kResolutionHits)
            v = Verdict::ResolutionLimited;
        if (v == Verdict::Violation) ++rep.violations;
        if (est.p_hat > 0)
            rep.max_ratio = std::max(rep.max_ratio, clamped > 0 ? est.p_hat / clamped
                                                                : std::numeric_limits<double>::infinity());
        rep.rows.push_back({est, bound, clamped, v});
    }
    return rep;
}

VerificationReport verify_bound(const Experiment& e, const BoundCurve& curve, const EngineOptions& opts) {
    // Reject a mismatched curve before paying for the sampling.
    compare_with_curve(e, {}, curve);
    return compare_with_curve(e, run_experiment(e, opts), curve);
}

BoundCurve curve_for_experiment(const Experiment& e, const std::string& curve_name, const EngineOptions& opts,
                                std::optional<double> beta, std::optional<NormEstimate>& norm) {
    CurveParams p{e.ensemble.n(), e.ensemble.b_max(), std::nullopt, beta};
    norm.reset();
    if (curve_needs_expected_norm(curve_name)) {
        norm = estimate_expected_norm(e, opts);
        p.expected_norm = norm->mean;
    }
    return make_curve(curve_name, p);
}

VerificationReport verify_named_curve(const Experiment& e, const std::string& curve_name, const EngineOptions& opts,
                                      std::optional<double> beta) {
    std::optional<NormEstimate> norm;
    auto rep = verify_bound(e, curve_for_experiment(e, curve_name, opts, beta, norm), opts);
    rep.expected_norm = norm;
    return rep;
}

} // namespace smallball
