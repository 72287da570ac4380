#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "smallball/distributions.hpp"
#include "smallball/quadrature.hpp"

using namespace smallball;

namespace {

std::vector<Distribution> all_laws() {
    return {Distribution::uniform(0, 1),
            Distribution::uniform(-2, 3),
            Distribution::gaussian(0, 1),
            Distribution::gaussian(1.5, 0.3),
            Distribution::triangular(0, 0.5, 1),
            Distribution::triangular(-1, -1, 2),
            Distribution::piecewise_constant({0, 1, 2, 4}, {0.5, 0.25, 0.125})};
}

} // namespace

TEST_CASE("density examples") {
    CHECK(Distribution::uniform(0, 1).density(0.5) == 1.0);
    CHECK(Distribution::uniform(0, 1).density(2.0) == 0.0);
    CHECK(Distribution::gaussian(0, 1).density(0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
}

TEST_CASE("density supremum is analytic") {
    CHECK(Distribution::uniform(0, 4).density_sup() == 0.25);
    CHECK(Distribution::gaussian(0, 2).density_sup() == doctest::Approx(1 / (2 * std::sqrt(2 * std::numbers::pi))));
    CHECK(Distribution::triangular(0, 0.5, 1).density_sup() == 2.0);
    CHECK(Distribution::piecewise_constant({0, 1, 2, 4}, {0.5, 0.25, 0.125}).density_sup() == 0.5);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(Distribution::uniform(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::gaussian(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::triangular(0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::piecewise_constant({0, 1}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::piecewise_constant({0, 1, 1}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution("cauchy:0,1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution("uniform:0"), std::invalid_argument);
}

TEST_CASE("shorthand parsing round-trips through describe") {
    CHECK(parse_distribution("uniform:0,1").describe() == "uniform(0,1)");
    CHECK(parse_distribution("gaussian:0,2").describe() == "gaussian(0,2)");
    CHECK(parse_distribution("triangular:0,0.5,1").describe() == "triangular(0,0.5,1)");
    CHECK(parse_distribution("piecewise:0,1,2;0.25,0.75").density_sup() == 0.75);
}

TEST_CASE("density never exceeds its supremum on a dense grid") {
    for (const auto& d : all_laws()) {
        const Interval s = d.truncated_support(8);
        for (int i = 0; i <= 20000; ++i) {
            const double x = s.lo - 0.5 + (s.hi - s.lo + 1.0) * i / 20000.0;
            REQUIRE(d.density(x) <= d.density_sup() * (1 + 1e-15));
        }
    }
}

TEST_CASE("density integrates to one") {
    QuadratureOptions tight{1e-13, 1e-13, 40, 16};
    for (const auto& d : all_laws()) {
        const Interval s = d.truncated_support(12);
        auto pts = normalize_breakpoints(d.kinks(), s.lo, s.hi);
        const double mass = integrate([&](double x) { return d.density(x); }, pts, tight).value;
        CAPTURE(d.describe());
        CHECK(std::abs(mass - 1.0) < 1e-9);
    }
}

TEST_CASE("sampler matches the analytic CDF (Kolmogorov-Smirnov)") {
    constexpr int n = 20000;
    // 99.9% KS critical value 1.95/sqrt(n)
    const double critical = 1.95 / std::sqrt(static_cast<double>(n));
    for (const auto& d : all_laws()) {
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) {
            Stream s(2024, static_cast<std::uint64_t>(i), 0);
            xs[static_cast<std::size_t>(i)] = d.sample(s);
        }
        std::sort(xs.begin(), xs.end());
        double ks = 0;
        for (int i = 0; i < n; ++i) {
            const double f = d.cdf(xs[static_cast<std::size_t>(i)]);
            ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
        }
        CAPTURE(d.describe());
        CHECK(ks < critical);
    }
}

TEST_CASE("small_ball_prob examples") {
    CHECK(small_ball_prob(Distribution::uniform(0, 1), -0.5, 0.1) == doctest::Approx(0.2).epsilon(1e-14));
    for (const auto& d : all_laws()) CHECK(small_ball_prob(d, 0.3, 0.0) == 0.0);
    // 2 Phi(0.1) - 1, scipy
    CHECK(small_ball_prob(Distribution::gaussian(0, 1), 0, 0.1) == doctest::Approx(0.07965567455405798).epsilon(1e-13));
    CHECK_THROWS_AS(small_ball_prob(Distribution::gaussian(0, 1), 0, -0.1), std::invalid_argument);
}

TEST_CASE("small_ball_sup examples") {
    CHECK(small_ball_sup(Distribution::uniform(0, 1), 0.1) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(small_ball_sup(Distribution::uniform(0, 1), 0.1) <= 2 * 1 * 0.1 + 1e-15);
    CHECK(small_ball_sup(Distribution::gaussian(0, 1), 0.0) == 0.0);
    // symmetric triangular: best window is centred, mass 1 - 2 * (0.45^2 * 2) = 0.19
    const auto tri = Distribution::triangular(0, 0.5, 1);
    CHECK(small_ball_sup(tri, 0.05) <= 0.2);
    CHECK(small_ball_sup(tri, 0.05) == doctest::Approx(0.19).epsilon(1e-9));
}

TEST_CASE("property: concentration never exceeds 2 b t") {
    Stream rng(77, 0, 0);
    const auto laws = all_laws();
    for (int trial = 0; trial < 5000; ++trial) {
        const auto& d = laws[static_cast<std::size_t>(rng.next_u32() % laws.size())];
        const double gamma = -6 + 12 * rng.uniform();
        const double t = std::pow(10.0, -6 + 6.5 * rng.uniform());
        // cdf differences lose ~1e-16 absolute to cancellation
        REQUIRE(small_ball_prob(d, gamma, t) <= 2 * d.density_sup() * t * (1 + 1e-12) + 1e-15);
    }
    for (const auto& d : laws)
        for (double t : {1e-4, 1e-2, 0.3}) CHECK(small_ball_sup(d, t) <= 2 * d.density_sup() * t * (1 + 1e-12) + 1e-15);
}

TEST_CASE("property: small_ball_prob is nondecreasing in t") {
    for (const auto& d : all_laws())
        for (double gamma : {-1.0, 0.0, 0.7}) {
            double prev = 0;
            for (int i = 0; i <= 200; ++i) {
                const double p = small_ball_prob(d, gamma, 0.025 * i);
                REQUIRE(p >= prev);
                prev = p;
            }
        }
}

TEST_CASE("window centred at the mode reaches the grid maximum for symmetric unimodal laws") {
    for (const auto& d : {Distribution::gaussian(0, 1), Distribution::gaussian(2, 0.5), Distribution::triangular(-1, 0, 1)})
        for (double t : {1e-3, 0.05, 0.4}) CHECK(small_ball_prob(d, -d.mode(), t) >= small_ball_sup(d, t) * (1 - 1e-12));
}
