#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "smallball/clopper_pearson.hpp"
#include "smallball/rng.hpp"

using namespace smallball;

// Reference values: scipy.special.betainc / scipy.stats.beta.ppf.

TEST_CASE("regularized incomplete beta") {
    CHECK(regularized_incomplete_beta(2, 3, 0.4) == doctest::Approx(0.5248).epsilon(1e-13));
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.1) == doctest::Approx(0.20483276469913345).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(50, 60, 0.45) == doctest::Approx(0.46423529143060444).epsilon(1e-11));
    CHECK(regularized_incomplete_beta(1, 1e5, 1e-5) == doctest::Approx(0.6321223982334279).epsilon(1e-10));
    CHECK(regularized_incomplete_beta(5e4, 5e4 + 1, 0.5) == doctest::Approx(0.5012615631070979).epsilon(1e-8));
    CHECK(regularized_incomplete_beta(3, 4, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(3, 4, 1.0) == 1.0);
}

TEST_CASE("Clopper-Pearson intervals") {
    struct Case {
        std::uint64_t k, n;
        double conf, lo, hi;
    };
    const Case cases[] = {
        {0, 100, 0.95, 0.0, 0.03621669264517641},
        {1, 100000, 0.99, 5.0125416979164106e-08, 7.429890621390486e-05},
        {5, 20, 0.95, 0.08657146910143462, 0.49104587170795744},
        {500, 1000, 0.99, 0.4588525533070451, 0.5411474466929549},
        {99999, 100000, 0.99, 0.9999257010937861, 0.9999999498745831},
        {5605, 100000, 0.99, 0.054192552953878835, 0.057949836497336274},
    };
    for (const auto& c : cases) {
        const auto ci = clopper_pearson(c.k, c.n, c.conf);
        CAPTURE(c.k);
        CAPTURE(c.n);
        CHECK(ci.low == doctest::Approx(c.lo).epsilon(1e-8));
        CHECK(ci.high == doctest::Approx(c.hi).epsilon(1e-8));
    }
    const auto all = clopper_pearson(10, 10, 0.9);
    CHECK(all.high == 1.0);
    CHECK_THROWS_AS(clopper_pearson(11, 10, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(clopper_pearson(1, 10, 1.0), std::invalid_argument);
}

TEST_CASE("property: interval brackets the point estimate") {
    for (std::uint64_t n : {1ull, 7ull, 100ull, 12345ull})
        for (std::uint64_t k = 0; k <= n; k += std::max<std::uint64_t>(1, n / 13)) {
            const auto ci = clopper_pearson(k, n, 0.99);
            const double p = static_cast<double>(k) / static_cast<double>(n);
            CHECK(ci.low <= p);
            CHECK(p <= ci.high);
        }
}

TEST_CASE("exact coverage is at least nominal") {
    // sum of binomial pmf over k whose interval covers p
    for (double p : {0.01, 0.1, 0.37, 0.5})
        for (std::uint64_t n : {20ull, 100ull}) {
            double coverage = 0;
            for (std::uint64_t k = 0; k <= n; ++k) {
                const auto ci = clopper_pearson(k, n, 0.9);
                if (ci.low <= p && p <= ci.high) {
                    const double kk = static_cast<double>(k), nn = static_cast<double>(n);
                    coverage += std::exp(std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) +
                                         kk * std::log(p) + (nn - kk) * std::log1p(-p));
                }
            }
            CAPTURE(p);
            CAPTURE(n);
            CHECK(coverage >= 0.9 - 1e-12);
        }
}

TEST_CASE("simulated coverage over 10^3 Bernoulli streams") {
    constexpr double p = 0.1;
    constexpr int n = 100, reps = 1000;
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
        Stream s(606, static_cast<std::uint64_t>(r), 0);
        std::uint64_t hits = 0;
        for (int i = 0; i < n; ++i) hits += s.uniform() < p;
        const auto ci = clopper_pearson(hits, n, 0.9);
        covered += ci.low <= p && p <= ci.high;
    }
    CHECK(static_cast<double>(covered) / reps >= 0.9);
}
