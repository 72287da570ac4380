#include "smallball/ensembles.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace smallball {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string describe_matrix(const Eigen::MatrixXd& m) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        s += i ? ";" : "";
        for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + fmt(m(i, j));
    }
    return s + "]";
}

} // namespace

EnsembleSpec::EnsembleSpec(int n, std::vector<Distribution> diagonal, OffDiagPolicy offdiag,
                           std::optional<Eigen::MatrixXd> shift)
    : n_(n), diagonal_(std::move(diagonal)), offdiag_(std::move(offdiag)), shift_(std::move(shift)) {
    if (n_ <= 0) throw std::invalid_argument("ensemble dimension n must be >= 1");
    if (diagonal_.size() == 1 && n_ > 1) diagonal_.resize(static_cast<std::size_t>(n_), diagonal_.front());
    if (diagonal_.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("ensemble needs 1 or n diagonal laws, got " + std::to_string(diagonal_.size()));
    if (shift_ && (shift_->rows() != n_ || shift_->cols() != n_))
        throw std::invalid_argument("shift must be " + std::to_string(n_) + "x" + std::to_string(n_));
    if (const auto* fm = std::get_if<offdiag::FixedMatrix>(&offdiag_)) {
        if (fm->values.rows() != n_ || fm->values.cols() != n_)
            throw std::invalid_argument("off-diagonal matrix must be " + std::to_string(n_) + "x" + std::to_string(n_));
    }
}

double EnsembleSpec::b_max() const {
    double b = 0.0;
    for (const auto& d : diagonal_) b = std::max(b, d.density_sup());
    return b;
}

bool EnsembleSpec::symmetric() const {
    const bool offdiag_sym = std::visit(overloaded{
                                            [](const offdiag::Zero&) { return true; },
                                            [](const offdiag::Constant&) { return true; },
                                            [](const offdiag::FixedMatrix& f) {
                                                return f.values.isApprox(f.values.transpose(), 0.0);
                                            },
                                            [](const offdiag::Iid&) { return false; },
                                            [](const offdiag::SymmetricIid&) { return true; },
                                            [](const offdiag::RankOne&) { return false; },
                                            [](const offdiag::SharedScalar&) { return true; },
                                        },
                                        offdiag_);
    return offdiag_sym && (!shift_ || *shift_ == shift_->transpose());
}

std::string EnsembleSpec::describe() const {
    std::string s = "n=" + std::to_string(n_) + ";diagonal=[";
    for (std::size_t i = 0; i < diagonal_.size(); ++i) s += (i ? "," : "") + diagonal_[i].describe();
    s += "];offdiag=";
    s += std::visit(overloaded{
                        [](const offdiag::Zero&) { return std::string("zero"); },
                        [](const offdiag::Constant& c) { return "constant(" + fmt(c.value) + ")"; },
                        [](const offdiag::FixedMatrix& f) { return "matrix" + describe_matrix(f.values); },
                        [](const offdiag::Iid& p) { return "iid(" + p.law.describe() + ")"; },
                        [](const offdiag::SymmetricIid& p) { return "symmetric_iid(" + p.law.describe() + ")"; },
                        [](const offdiag::RankOne& p) { return "rank_one(" + p.law.describe() + ")"; },
                        [](const offdiag::SharedScalar& p) { return "shared_scalar(" + p.law.describe() + ")"; },
                    },
                    offdiag_);
    s += ";shift=" + (shift_ ? describe_matrix(*shift_) : std::string("none"));
    return s;
}

StreamId diagonal_stream(std::uint64_t master_seed, std::uint64_t index, int position) {
    return {master_seed, index, role::diagonal(static_cast<std::uint32_t>(position))};
}

StreamId offdiag_stream(std::uint64_t master_seed, std::uint64_t index) {
    return {master_seed, index, role::offdiag};
}

std::vector<StreamId> sample_streams(const EnsembleSpec& spec, std::uint64_t master_seed, std::uint64_t index) {
    std::vector<StreamId> ids;
    ids.push_back(offdiag_stream(master_seed, index));
    for (int i = 0; i < spec.n(); ++i) ids.push_back(diagonal_stream(master_seed, index, i));
    return ids;
}

void sample_into(const EnsembleSpec& spec, std::uint64_t master_seed, std::uint64_t index, Eigen::MatrixXd& m) {
    const Eigen::Index n = spec.n();
    m.resize(n, n);

    Stream off(offdiag_stream(master_seed, index));
    std::visit(overloaded{
                   [&](const offdiag::Zero&) { m.setZero(); },
                   [&](const offdiag::Constant& c) { m.setConstant(c.value); },
                   [&](const offdiag::FixedMatrix& f) { m = f.values; },
                   [&](const offdiag::Iid& p) {
                       for (Eigen::Index i = 0; i < n; ++i)
                           for (Eigen::Index j = 0; j < n; ++j)
                               if (i != j) m(i, j) = p.law.sample(off);
                   },
                   [&](const offdiag::SymmetricIid& p) {
                       for (Eigen::Index i = 0; i < n; ++i)
                           for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = p.law.sample(off);
                   },
                   [&](const offdiag::RankOne& p) {
                       Eigen::VectorXd u(n), v(n);
                       for (Eigen::Index i = 0; i < n; ++i) u(i) = p.law.sample(off);
                       for (Eigen::Index i = 0; i < n; ++i) v(i) = p.law.sample(off);
                       m.noalias() = u * v.transpose();
                   },
                   [&](const offdiag::SharedScalar& p) { m.setConstant(p.law.sample(off)); },
               },
               spec.offdiag_policy());

    for (int i = 0; i < spec.n(); ++i) {
        Stream diag(diagonal_stream(master_seed, index, i));
        m(i, i) = spec.diagonal_law(i).sample(diag);
    }
    if (spec.shift()) m += *spec.shift();
}

MatrixSample sample_matrix(const EnsembleSpec& spec, std::uint64_t master_seed, std::uint64_t index) {
    MatrixSample s{Eigen::MatrixXd(spec.n(), spec.n()), master_seed, index};
    sample_into(spec, master_seed, index, s.entries);
    return s;
}

EnsembleSpec symmetric_ensemble(int n, const Distribution& diagonal_law, const Distribution& upper_law) {
    return EnsembleSpec(n, {diagonal_law}, offdiag::SymmetricIid{upper_law});
}

} // namespace smallball
