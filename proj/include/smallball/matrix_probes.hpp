#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace smallball {

template <typename Scalar>
struct LogAbsDet {
    /// log|det|, or -infinity for an exactly singular input.
    Scalar log_abs_det;
    /// -1, 0 or +1.
    int sign;

    bool singular() const { return sign == 0; }
};

/// Pivots below this magnitude count as exact zeros.
inline constexpr double kSingularPivot = 1e-300;

/// log|det(m)| and sign(det(m)) from a row-pivoted LU factorization,
/// accumulating log|pivot| so that the result never under- or overflows.
template <typename Derived>
LogAbsDet<typename Derived::Scalar> log_abs_det(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.rows() != m.cols()) throw std::invalid_argument("log_abs_det: matrix must be square");
    if (m.rows() == 0) return {Scalar(0), 1};

    const Eigen::PartialPivLU<Mat> lu(m.eval());
    const auto& packed = lu.matrixLU();
    Scalar acc(0);
    int sign = static_cast<int>(lu.permutationP().determinant());
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const Scalar pivot = packed(i, i);
        if (!(std::abs(pivot) >= Scalar(kSingularPivot)))
            return {-std::numeric_limits<Scalar>::infinity(), 0};
        acc += std::log(std::abs(pivot));
        if (pivot < 0) sign = -sign;
    }
    return {acc, sign};
}

/// Singular values in descending order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> singular_values(const Eigen::MatrixBase<Derived>& m) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.size() == 0) return {};
    return Eigen::JacobiSVD<Mat>(m.eval()).singularValues();
}

template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& m) {
    const auto s = singular_values(m);
    return s.size() ? s(0) : typename Derived::Scalar(0);
}

template <typename Derived>
typename Derived::Scalar smallest_singular_value(const Eigen::MatrixBase<Derived>& m) {
    const auto s = singular_values(m);
    return s.size() ? s(s.size() - 1) : typename Derived::Scalar(0);
}

inline constexpr int kDefaultPermanentCap = 20;

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code ordered
/// subsets; O(2^n n).
template <typename Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& m, int max_n = kDefaultPermanentCap) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() != m.cols()) throw std::invalid_argument("permanent: matrix must be square");
    const auto n = static_cast<int>(m.rows());
    if (n > max_n || n > 62)
        throw std::invalid_argument("permanent: n = " + std::to_string(n) + " exceeds cap " + std::to_string(max_n));
    if (n == 0) return Scalar(1);

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sums = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
    Scalar total(0);
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const std::uint64_t next = k ^ (k >> 1);
        const std::uint64_t flipped = next ^ gray;
        const int col = std::countr_zero(flipped);
        if (next & flipped)
            row_sums += m.col(col);
        else
            row_sums -= m.col(col);
        gray = next;
        const int size = std::popcount(gray);
        const Scalar prod = row_sums.prod();
        total += ((n - size) % 2 == 0) ? prod : -prod;
    }
    return total;
}

template <typename Scalar>
struct ProbeResult {
    Scalar log_abs_det;
    int sign;
    Scalar s_min;
    Scalar s_max;
    std::optional<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> full_spectrum;
};

template <typename Derived>
ProbeResult<typename Derived::Scalar> probe(const Eigen::MatrixBase<Derived>& m, bool keep_spectrum = false) {
    const auto det = log_abs_det(m);
    auto s = singular_values(m);
    ProbeResult<typename Derived::Scalar> r{det.log_abs_det, det.sign, s(s.size() - 1), s(0), std::nullopt};
    if (keep_spectrum) r.full_spectrum = std::move(s);
    return r;
}

} // namespace smallball
