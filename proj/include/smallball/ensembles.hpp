#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "smallball/distributions.hpp"
#include "smallball/rng.hpp"

namespace smallball {

// Off-diagonal filler policies. None of them touches the diagonal, and all
// draws come from the dedicated off-diagonal stream.
namespace offdiag {
struct Zero {};
struct Constant {
    double value;
};
/// Off-diagonal part of a fixed matrix; its diagonal is ignored.
struct FixedMatrix {
    Eigen::MatrixXd values;
};
struct Iid {
    Distribution law;
};
/// Upper triangle iid, mirrored into the lower triangle.
struct SymmetricIid {
    Distribution law;
};
/// T_ij = u_i * v_j with u, v drawn iid from `law` once per sample.
struct RankOne {
    Distribution law;
};
/// Every off-diagonal entry equals one scalar drawn per sample.
struct SharedScalar {
    Distribution law;
};
} // namespace offdiag

using OffDiagPolicy = std::variant<offdiag::Zero, offdiag::Constant, offdiag::FixedMatrix, offdiag::Iid,
                                   offdiag::SymmetricIid, offdiag::RankOne, offdiag::SharedScalar>;

/// Recipe for M = A + T: independent continuous diagonal entries, arbitrary
/// off-diagonal content, optional deterministic shift A.
class EnsembleSpec {
  public:
    /// `diagonal` holds either one law (used for every position) or n laws.
    EnsembleSpec(int n, std::vector<Distribution> diagonal, OffDiagPolicy offdiag = offdiag::Zero{},
                 std::optional<Eigen::MatrixXd> shift = std::nullopt);

    int n() const { return n_; }
    const Distribution& diagonal_law(int i) const { return diagonal_[static_cast<std::size_t>(i)]; }
    const std::vector<Distribution>& diagonal_laws() const { return diagonal_; }
    const OffDiagPolicy& offdiag_policy() const { return offdiag_; }
    const std::optional<Eigen::MatrixXd>& shift() const { return shift_; }

    /// Largest diagonal density supremum: the b entering every bound curve.
    double b_max() const;
    /// True when every sample is a symmetric matrix.
    bool symmetric() const;
    /// Canonical one-line text form used for report digests.
    std::string describe() const;

  private:
    int n_;
    std::vector<Distribution> diagonal_;
    OffDiagPolicy offdiag_;
    std::optional<Eigen::MatrixXd> shift_;
};

struct MatrixSample {
    Eigen::MatrixXd entries;
    std::uint64_t master_seed;
    std::uint64_t index;
};

StreamId diagonal_stream(std::uint64_t master_seed, std::uint64_t index, int position);
StreamId offdiag_stream(std::uint64_t master_seed, std::uint64_t index);
/// Every stream a sample at (master_seed, index) draws from.
std::vector<StreamId> sample_streams(const EnsembleSpec& spec, std::uint64_t master_seed, std::uint64_t index);

/// Deterministic in (master_seed, index): independent of worker count or order.
MatrixSample sample_matrix(const EnsembleSpec& spec, std::uint64_t master_seed, std::uint64_t index);
/// Same as sample_matrix, writing into a preallocated n x n matrix.
void sample_into(const EnsembleSpec& spec, std::uint64_t master_seed, std::uint64_t index, Eigen::MatrixXd& out);

EnsembleSpec symmetric_ensemble(int n, const Distribution& diagonal_law, const Distribution& upper_law);

} // namespace smallball
