#include "smallball/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace smallball {

namespace {

using nlohmann::json;

// A JSON value together with its field path, for diagnostics.
class Node {
  public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_, msg); }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
    Node at(const char* key) const {
        if (!has(key)) fail(std::string("missing required field '") + key + "'");
        return {j_.at(key), path_ + "." + key};
    }
    Node at(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

    void expect_object(std::initializer_list<const char*> allowed) const {
        if (!j_.is_object()) fail("expected an object");
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, _] : j_.items())
            if (!ok.count(k)) throw ConfigError(path_ + "." + k, "unknown field");
    }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        return j_.get<double>();
    }
    std::uint64_t unsigned_int() const {
        if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0))
            fail("expected a nonnegative integer");
        return j_.get<std::uint64_t>();
    }
    int positive_int() const {
        const auto v = unsigned_int();
        if (v == 0 || v > 1'000'000) fail("expected a positive integer");
        return static_cast<int>(v);
    }
    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    std::size_t array_size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }

  private:
    const json& j_;
    std::string path_;
};

Distribution parse_law(const Node& node) {
    try {
        if (node.raw().is_string()) return parse_distribution(node.string());
        if (!node.raw().is_object()) node.fail("expected a distribution record or 'kind:params' string");
        const std::string kind = node.at("kind").string();
        if (kind == "uniform") {
            node.expect_object({"kind", "a", "c"});
            return Distribution::uniform(node.at("a").number(), node.at("c").number());
        }
        if (kind == "gaussian") {
            node.expect_object({"kind", "mu", "sigma"});
            return Distribution::gaussian(node.at("mu").number(), node.at("sigma").number());
        }
        if (kind == "triangular") {
            node.expect_object({"kind", "a", "m", "c"});
            return Distribution::triangular(node.at("a").number(), node.at("m").number(), node.at("c").number());
        }
        if (kind == "piecewise") {
            node.expect_object({"kind", "breakpoints", "heights"});
            auto list = [](const Node& n) {
                std::vector<double> v(n.array_size());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = n.at(i).number();
                return v;
            };
            return Distribution::piecewise_constant(list(node.at("breakpoints")), list(node.at("heights")));
        }
        node.at("kind").fail("unknown distribution kind '" + kind + "'");
    } catch (const std::invalid_argument& e) {
        node.fail(e.what());
    }
}

Eigen::MatrixXd parse_matrix(const Node& node, const std::filesystem::path& base_dir, int n) {
    Eigen::MatrixXd m;
    if (node.raw().is_string()) {
        try {
            m = read_matrix_csv(base_dir / node.string());
        } catch (const std::exception& e) {
            node.fail(e.what());
        }
    } else if (node.raw().is_object()) {
        node.expect_object({"fill"});
        m = Eigen::MatrixXd::Constant(n, n, node.at("fill").number());
    } else {
        const auto rows = node.array_size();
        for (std::size_t i = 0; i < rows; ++i) {
            const Node row = node.at(i);
            const auto cols = row.array_size();
            if (i == 0) m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            if (cols != static_cast<std::size_t>(m.cols())) row.fail("ragged matrix row");
            for (std::size_t j = 0; j < cols; ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row.at(j).number();
        }
    }
    if (m.rows() != n || m.cols() != n)
        node.fail("matrix must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " +
                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return m;
}

OffDiagPolicy parse_offdiag(const Node& node, const std::filesystem::path& base_dir, int n) {
    if (node.raw().is_string()) {
        if (node.string() == "zero") return offdiag::Zero{};
        node.fail("only 'zero' may be given as a bare string; use {\"policy\": ...}");
    }
    const std::string policy = node.at("policy").string();
    if (policy == "zero") {
        node.expect_object({"policy"});
        return offdiag::Zero{};
    }
    if (policy == "constant") {
        node.expect_object({"policy", "value"});
        return offdiag::Constant{node.at("value").number()};
    }
    if (policy == "matrix") {
        node.expect_object({"policy", "matrix"});
        return offdiag::FixedMatrix{parse_matrix(node.at("matrix"), base_dir, n)};
    }
    node.expect_object({"policy", "law"});
    const Distribution law = parse_law(node.at("law"));
    if (policy == "iid") return offdiag::Iid{law};
    if (policy == "symmetric_iid") return offdiag::SymmetricIid{law};
    if (policy == "rank_one") return offdiag::RankOne{law};
    if (policy == "shared_scalar") return offdiag::SharedScalar{law};
    node.at("policy").fail("unknown off-diagonal policy '" + policy + "'");
}

EnsembleSpec parse_ensemble(const Node& node, const std::filesystem::path& base_dir) {
    node.expect_object({"n", "diagonal", "offdiag", "shift"});
    const int n = node.at("n").positive_int();
    std::vector<Distribution> diag;
    const Node d = node.at("diagonal");
    if (d.raw().is_array()) {
        const auto k = d.array_size();
        if (k != 1 && k != static_cast<std::size_t>(n)) d.fail("expected 1 or n = " + std::to_string(n) + " laws");
        for (std::size_t i = 0; i < k; ++i) diag.push_back(parse_law(d.at(i)));
    } else {
        diag.push_back(parse_law(d));
    }
    OffDiagPolicy off = node.has("offdiag") ? parse_offdiag(node.at("offdiag"), base_dir, n) : offdiag::Zero{};
    std::optional<Eigen::MatrixXd> shift;
    if (node.has("shift") && !node.raw().at("shift").is_null()) shift = parse_matrix(node.at("shift"), base_dir, n);
    try {
        return EnsembleSpec(n, std::move(diag), std::move(off), std::move(shift));
    } catch (const std::invalid_argument& e) {
        node.fail(e.what());
    }
}

std::vector<double> parse_grid(const Node& node) {
    if (node.raw().is_array()) {
        std::vector<double> g(node.array_size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = node.at(i).number();
            if (!(g[i] >= 0)) node.at(i).fail("thresholds must be >= 0");
            if (i && !(g[i] > g[i - 1])) node.at(i).fail("thresholds must be strictly increasing");
        }
        if (g.empty()) node.fail("empty threshold list");
        return g;
    }
    node.expect_object({"min", "max", "points", "log"});
    bool log = true;
    if (node.has("log")) {
        if (!node.raw().at("log").is_boolean()) node.at("log").fail("expected true or false");
        log = node.raw().at("log").get<bool>();
    }
    try {
        return make_t_grid(node.at("min").number(), node.at("max").number(), node.at("points").positive_int(), log);
    } catch (const std::invalid_argument& e) {
        node.fail(e.what());
    }
}

ExperimentConfig parse_experiment(const Node& node, const std::filesystem::path& base_dir,
                                  std::optional<std::uint64_t> default_seed) {
    node.expect_object({"name", "ensemble", "functional", "curves", "t_grid", "samples", "confidence", "seed",
                        "expected_norm_samples", "b", "permanent_cap"});
    const std::string name = node.at("name").string();
    if (name.empty() || name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") !=
                            std::string::npos)
        node.at("name").fail("names may only contain letters, digits, '_', '.', '-'");

    EnsembleSpec ensemble = parse_ensemble(node.at("ensemble"), base_dir);
    Functional functional = Functional::DetRootN;
    if (node.has("functional")) {
        try {
            functional = parse_functional(node.at("functional").string());
        } catch (const std::invalid_argument& e) {
            node.at("functional").fail(e.what());
        }
    }

    std::uint64_t seed = 0;
    if (node.has("seed"))
        seed = node.at("seed").unsigned_int();
    else if (default_seed)
        seed = *default_seed;
    else
        node.fail("missing 'seed' (set it per experiment or at top level)");

    Experiment e{name, std::move(ensemble), functional, parse_grid(node.at("t_grid")),
                 node.has("samples") ? node.at("samples").unsigned_int() : 100000, seed};
    if (e.samples == 0) node.at("samples").fail("samples must be >= 1");
    if (node.has("confidence")) {
        e.confidence = node.at("confidence").number();
        if (!(e.confidence > 0 && e.confidence < 1)) node.at("confidence").fail("confidence must lie in (0,1)");
    }
    if (node.has("expected_norm_samples")) {
        e.expected_norm_samples = node.at("expected_norm_samples").unsigned_int();
        if (e.expected_norm_samples < 2) node.at("expected_norm_samples").fail("need at least 2 samples");
    }
    if (node.has("permanent_cap")) e.permanent_cap = node.at("permanent_cap").positive_int();
    if (e.functional == Functional::PermanentRootN && e.ensemble.n() > e.permanent_cap)
        node.at("functional").fail("permanent_root_n is capped at n = " + std::to_string(e.permanent_cap));
    if (node.has("b")) {
        const double b = node.at("b").number();
        const double b_max = e.ensemble.b_max();
        if (std::abs(b - b_max) > 1e-9 * b_max)
            node.at("b").fail("declared b does not match the diagonal density supremum " + std::to_string(b_max));
    }

    ExperimentConfig cfg{std::move(e), {}};
    if (node.has("curves")) {
        const Node curves = node.at("curves");
        for (std::size_t i = 0; i < curves.array_size(); ++i) {
            const Node c = curves.at(i);
            CurveRequest req;
            if (c.raw().is_string()) {
                req.name = c.string();
            } else {
                c.expect_object({"name", "beta"});
                req.name = c.at("name").string();
                if (c.has("beta")) req.beta = c.at("beta").number();
            }
            if (!is_curve_name(req.name)) c.fail("unknown bound curve '" + req.name + "'");
            const auto target = curve_functional(req.name);
            if (!target) c.fail("curve '" + req.name + "' cannot be verified against a matrix functional");
            if (*target != cfg.experiment.functional)
                c.fail("curve '" + req.name + "' bounds " + std::string(to_string(*target)) +
                       ", not " + std::string(to_string(cfg.experiment.functional)));
            if (req.name == "det2x2" && cfg.experiment.ensemble.n() != 2) c.fail("curve 'det2x2' needs n = 2");
            if (req.beta && !(*req.beta > 0)) c.fail("beta must be > 0");
            cfg.curves.push_back(std::move(req));
        }
    }
    return cfg;
}

} // namespace

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            try {
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw std::runtime_error("bad matrix entry '" + cell + "' in " + path.string());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged matrix row in " + path.string());
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    const Node node(root, "$");
    node.expect_object({"experiments", "output_dir", "workers", "seed"});

    RunConfig cfg;
    if (node.has("output_dir")) cfg.output_dir = node.at("output_dir").string();
    if (node.has("workers")) cfg.workers = node.at("workers").positive_int();
    std::optional<std::uint64_t> seed;
    if (node.has("seed")) seed = node.at("seed").unsigned_int();

    const Node exps = node.at("experiments");
    std::set<std::string> names;
    for (std::size_t i = 0; i < exps.array_size(); ++i) {
        auto e = parse_experiment(exps.at(i), base_dir, seed);
        if (!names.insert(e.experiment.name).second)
            exps.at(i).at("name").fail("duplicate experiment name '" + e.experiment.name + "'");
        cfg.experiments.push_back(std::move(e));
    }
    if (cfg.experiments.empty()) exps.fail("no experiments");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

} // namespace smallball
