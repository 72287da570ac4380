#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smallball/ensembles.hpp"
#include "smallball/matrix_probes.hpp"

using namespace smallball;

namespace {

Eigen::MatrixXd random_matrix(int n, std::uint64_t index, double lo = -1, double hi = 1) {
    const EnsembleSpec spec(n, {Distribution::uniform(lo, hi)}, offdiag::Iid{Distribution::uniform(lo, hi)});
    return sample_matrix(spec, 4242, index).entries;
}

} // namespace

TEST_CASE("log_abs_det examples") {
    const auto id = log_abs_det(Eigen::MatrixXd::Identity(5, 5));
    CHECK(id.log_abs_det == 0.0);
    CHECK(id.sign == 1);
    Eigen::MatrixXd d = Eigen::Vector3d(2, 3, 4).asDiagonal();
    const auto r = log_abs_det(d);
    CHECK(r.log_abs_det == doctest::Approx(std::log(24.0)).epsilon(1e-15));
    CHECK(r.sign == 1);
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK(log_abs_det(swap).sign == -1);
}

TEST_CASE("log_abs_det flags exact singularity and rejects non-square input") {
    Eigen::MatrixXd s(3, 3);
    s << 1, 2, 3, 2, 4, 6, 0, 1, 1;
    const auto r = log_abs_det(s);
    CHECK(r.sign == 0);
    CHECK(std::isinf(r.log_abs_det));
    CHECK(r.log_abs_det < 0);
    CHECK_THROWS_AS(log_abs_det(Eigen::MatrixXd::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("log_abs_det survives determinants far below double underflow") {
    const Eigen::MatrixXd tiny = 1e-10 * Eigen::MatrixXd::Identity(100, 100);
    CHECK(log_abs_det(tiny).log_abs_det == doctest::Approx(100 * std::log(1e-10)).epsilon(1e-14));
}

TEST_CASE("log_abs_det agrees with cofactor expansion") {
    for (int n = 1; n <= 6; ++n)
        for (std::uint64_t k = 0; k < 20; ++k) {
            const auto m = random_matrix(n, k);
            const double ref = oracle::cofactor_det(m);
            const auto r = log_abs_det(m);
            CHECK(r.sign == (ref > 0 ? 1 : -1));
            CHECK(std::abs(std::exp(r.log_abs_det) - std::abs(ref)) <= 1e-10 * std::abs(ref));
        }
}

TEST_CASE("log_abs_det is templated on the scalar") {
    Eigen::Matrix3f f;
    f << 2, 0, 0, 0, 3, 0, 0, 0, 4;
    const auto r = log_abs_det(f);
    static_assert(std::is_same_v<decltype(r.log_abs_det), float>);
    CHECK(r.log_abs_det == doctest::Approx(std::log(24.0f)));
}

TEST_CASE("permanent examples and cap") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 3, 4;
    CHECK(permanent(m) == 10.0);
    CHECK(permanent(Eigen::MatrixXd::Identity(4, 4)) == 1.0);
    CHECK(permanent(Eigen::MatrixXd::Ones(4, 4)) == doctest::Approx(24.0));
    CHECK_THROWS_AS(permanent(Eigen::MatrixXd::Ones(6, 6), 5), std::invalid_argument);
}

TEST_CASE("permanent agrees with the permutation sum") {
    for (int n = 1; n <= 6; ++n)
        for (std::uint64_t k = 0; k < 10; ++k) {
            const auto m = random_matrix(n, 100 + k, 0, 1);
            const double ref = oracle::permutation_sum_permanent(m);
            CHECK(std::abs(permanent(m) - ref) <= 1e-10 * std::abs(ref));
        }
}

TEST_CASE("singular value examples") {
    const auto id = singular_values(Eigen::MatrixXd::Identity(3, 3));
    CHECK(id.isApprox(Eigen::Vector3d(1, 1, 1)));
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK(singular_values(swap).isApprox(Eigen::Vector2d(1, 1)));
    Eigen::MatrixXd d = Eigen::Vector3d(1, 2, 3).asDiagonal();
    CHECK(singular_values(d).isApprox(Eigen::Vector3d(3, 2, 1)));
}

TEST_CASE("property: |det| equals the product of singular values") {
    for (int n = 1; n <= 10; ++n)
        for (std::uint64_t k = 0; k < 20; ++k) {
            const auto m = random_matrix(n, 1000 + k);
            const auto p = probe(m, true);
            const double logprod = p.full_spectrum->array().log().sum();
            CHECK(std::abs(std::exp(p.log_abs_det - logprod) - 1) < 1e-8);
            CHECK(p.s_min <= p.s_max);
            for (Eigen::Index i = 1; i < p.full_spectrum->size(); ++i)
                CHECK((*p.full_spectrum)(i) <= (*p.full_spectrum)(i - 1));
        }
}

TEST_CASE("property: |det| <= ||T||^{n-1} s_n and s_n ||T^-1|| = 1") {
    for (int n = 1; n <= 10; ++n)
        for (std::uint64_t k = 0; k < 20; ++k) {
            const auto m = random_matrix(n, 2000 + k);
            const auto p = probe(m);
            CHECK(p.log_abs_det <= (n - 1) * std::log(p.s_max) + std::log(p.s_min) + 1e-10);
            const Eigen::MatrixXd inv = m.inverse();
            CHECK(p.s_min * operator_norm(inv) == doctest::Approx(1.0).epsilon(1e-6));
        }
}

TEST_CASE("property: the norm dominates every diagonal entry of a symmetric sample") {
    const auto spec = symmetric_ensemble(6, Distribution::uniform(-1, 1), Distribution::gaussian(0, 1));
    for (std::uint64_t k = 0; k < 200; ++k) {
        const auto m = sample_matrix(spec, 17, k).entries;
        CHECK(operator_norm(m) >= m.diagonal().cwiseAbs().maxCoeff() * (1 - 1e-14));
    }
}
