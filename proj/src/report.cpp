#include "smallball/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smallball {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ensemble_digest(const EnsembleSpec& spec) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : spec.describe()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void write_metadata(std::ostream& out, const Experiment& e) {
    out << "# experiment=" << e.name << '\n'
        << "# functional=" << to_string(e.functional) << '\n'
        << "# seed=" << e.master_seed << '\n'
        << "# samples=" << e.samples << '\n'
        << "# confidence=" << format_double(e.confidence) << '\n'
        << "# n=" << e.ensemble.n() << '\n'
        << "# b=" << format_double(e.ensemble.b_max()) << '\n'
        << "# ensemble_digest=" << ensemble_digest(e.ensemble) << '\n'
        << "# ensemble=" << e.ensemble.describe() << '\n';
}

} // namespace

void write_verification_csv(std::ostream& out, const Experiment& e, const VerificationReport& rep) {
    write_metadata(out, e);
    out << "# curve=" << rep.curve << '\n' << "# formula=" << rep.formula << '\n';
    if (rep.expected_norm) {
        out << "# expected_norm=" << format_double(rep.expected_norm->mean) << '\n'
            << "# expected_norm_std_error=" << format_double(rep.expected_norm->std_error) << '\n'
            << "# expected_norm_samples=" << rep.expected_norm->samples << '\n'
            << "# expected_norm_seed=" << rep.expected_norm->seed << '\n';
    }
    out << "# violations=" << rep.violations << '\n' << "# max_ratio=" << format_double(rep.max_ratio) << '\n';
    out << "t,p_hat,ci_low,ci_high,bound,bound_clamped,verdict\n";
    for (const auto& r : rep.rows) {
        out << format_double(r.estimate.t) << ',' << format_double(r.estimate.p_hat) << ','
            << format_double(r.estimate.ci_low) << ',' << format_double(r.estimate.ci_high) << ','
            << format_double(r.bound) << ',' << format_double(r.bound_clamped) << ',' << to_string(r.verdict)
            << '\n';
    }
}

void write_estimate_csv(std::ostream& out, const Experiment& e, const std::vector<EstimationResult>& rows) {
    write_metadata(out, e);
    out << "t,hits,n_samples,p_hat,ci_low,ci_high\n";
    for (const auto& r : rows)
        out << format_double(r.t) << ',' << r.hits << ',' << r.n_samples << ',' << format_double(r.p_hat) << ','
            << format_double(r.ci_low) << ',' << format_double(r.ci_high) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "experiment,curve,violations,max_ratio,rows,status\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.curve << ',' << r.violations << ',' << format_double(r.max_ratio) << ','
            << r.rows << ',' << (r.violations ? "VIOLATION" : "PASS") << '\n';
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) t.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        if (t.header.empty())
            t.header = split(line);
        else
            t.rows.push_back(split(line));
    }
    if (t.header.empty()) throw std::runtime_error(path.string() + " has no header row");
    return t;
}

} // namespace smallball
