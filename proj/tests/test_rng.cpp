#include <doctest.h>

#include <cmath>

#include <set>

#include "smallball/rng.hpp"

using namespace smallball;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Random123 kat_vectors
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream is a pure function of its id") {
    Stream a(42, 7, role::diagonal(3));
    Stream b(42, 7, role::diagonal(3));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Stream c(42, 7, role::diagonal(4));
    Stream d(42, 8, role::diagonal(3));
    Stream e(43, 7, role::diagonal(3));
    Stream ref(42, 7, role::diagonal(3));
    const auto first = ref.next_u64();
    CHECK(c.next_u64() != first);
    CHECK(d.next_u64() != first);
    CHECK(e.next_u64() != first);
}

TEST_CASE("uniform draws stay strictly inside (0,1) and have the right mean") {
    Stream s(1, 0, 0);
    double sum = 0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // sd of the mean is 1/sqrt(12 n) ~ 6.5e-4
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("normal draws have unit variance") {
    Stream s(9, 1, 0);
    double sum = 0, sq = 0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.015));
}

TEST_CASE("derived seeds differ from the master and from each other") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t tag = 0; tag < 64; ++tag) seen.insert(derive_seed(12345, tag));
    CHECK(seen.size() == 64);
    CHECK(!seen.count(12345));
}
