#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracbayes/rng.hpp"

using namespace fracbayes;

TEST_CASE("streams are deterministic and distinct") {
    CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::vector<std::uint64_t> va, vb;
    bool differs_stream = false, differs_seed = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t x = a.next_u64();
        va.push_back(x);
        vb.push_back(b.next_u64());
        if (x != c.next_u64()) differs_stream = true;
        if (x != d.next_u64()) differs_seed = true;
    }
    CHECK(va == vb);
    CHECK(differs_stream);
    CHECK(differs_seed);
}

TEST_CASE("uniforms stay strictly inside (0,1) with the right mean") {
    CounterRng rng(123, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal moments") {
    CounterRng rng(9, 1);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal();
        s1 += z;
        s2 += z * z;
    }
    CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("gamma, chi-square, and beta moments") {
    CounterRng rng(2024, 3);
    const int n = 100000;

    double g = 0.0;
    for (int i = 0; i < n; ++i) g += rng.next_gamma(2.5);
    CHECK(std::abs(g / n - 2.5) < 4.0 * std::sqrt(2.5 / n));

    double c = 0.0;
    for (int i = 0; i < n; ++i) c += rng.next_chi_square(1.0);
    CHECK(std::abs(c / n - 1.0) < 4.0 * std::sqrt(2.0 / n));

    double b = 0.0;
    for (int i = 0; i < n; ++i) b += rng.next_beta(3.0, 3.0);
    CHECK(std::abs(b / n - 0.5) < 4.0 * std::sqrt(1.0 / (28.0 * n)));
}

TEST_CASE("substream is injective in the index for a fixed parent") {
    std::vector<std::uint64_t> ids;
    for (std::uint64_t i = 0; i < 4096; ++i) ids.push_back(substream(77, i));
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}
