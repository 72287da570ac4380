#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smallball/mc_engine.hpp"

namespace smallball {

/// Schema violation; `path()` names the offending field, e.g.
/// "experiments[0].curves[1]".
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct CurveRequest {
    std::string name;
    std::optional<double> beta;
};

struct ExperimentConfig {
    Experiment experiment;
    std::vector<CurveRequest> curves;
};

struct RunConfig {
    std::vector<ExperimentConfig> experiments;
    std::filesystem::path output_dir = "smallball-out";
    std::optional<int> workers;
};

/// Parses a JSON run configuration. Relative CSV matrix paths resolve
/// against `base_dir`. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

/// Reads a dense matrix from a comma-separated file, one row per line.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

} // namespace smallball
