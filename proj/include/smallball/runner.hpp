#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "smallball/config.hpp"

namespace smallball {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

struct RunOptions {
    std::optional<std::uint64_t> seed;     // overrides every experiment seed
    std::optional<int> workers;            // beats config, then SMALLBALL_WORKERS
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::string> experiment; // run only this one
    std::optional<std::string> curve;      // verify only this curve
    bool estimate_only = false;            // skip curves entirely
    std::ostream* log = nullptr;
    const std::atomic<bool>* cancel = nullptr;
};

/// Worker count: explicit value, else SMALLBALL_WORKERS, else hardware.
int resolve_worker_count(std::optional<int> requested);

/// Runs every experiment in order. Writes <out>/<experiment>.estimate.csv,
/// one <out>/<experiment>.<curve>.csv per curve, and <out>/summary.csv after
/// each experiment. Returns 0 iff no bound violation, 2 on any violation,
/// 1 on configuration or runtime errors (including cancellation).
int run(const RunConfig& config, const RunOptions& opts);
int run(const std::filesystem::path& config_path, const RunOptions& opts);

} // namespace smallball
