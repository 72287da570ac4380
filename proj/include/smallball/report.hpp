#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "smallball/mc_engine.hpp"

namespace smallball {

/// 17 significant digits: round-trips every double. "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

/// FNV-1a 64 of the ensemble's canonical description, as 16 hex digits.
std::string ensemble_digest(const EnsembleSpec& spec);

/// Verification CSV: "# key=value" metadata lines, then the columns
/// t,p_hat,ci_low,ci_high,bound,bound_clamped,verdict.
void write_verification_csv(std::ostream& out, const Experiment& e, const VerificationReport& rep);

/// Estimate CSV: metadata, then t,hits,n_samples,p_hat,ci_low,ci_high.
void write_estimate_csv(std::ostream& out, const Experiment& e, const std::vector<EstimationResult>& rows);

struct SummaryRow {
    std::string experiment;
    std::string curve;
    int violations;
    double max_ratio;
    std::size_t rows;
};

/// summary.csv: experiment,curve,violations,max_ratio,rows,status.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// A parsed report CSV: metadata from "# key=value" lines plus columns.
struct CsvTable {
    std::map<std::string, std::string> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column, or -1.
    int column(const std::string& name) const;
};

CsvTable read_csv_table(const std::filesystem::path& path);

} // namespace smallball
