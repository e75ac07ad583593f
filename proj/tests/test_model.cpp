#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qrm2/model.hpp"
#include "qrm2/oracle.hpp"

using namespace qrm2;

TEST_CASE("validate_params canonicalizes and records sign flips") {
    const auto p = validate_params(0.7, 0.4, 0.8, 0.4);
    CHECK(p.delta1 == 0.7);
    CHECK(p.delta2 == 0.4);
    CHECK(p.g1 == 0.8);
    CHECK(p.g2 == 0.4);
    CHECK_FALSE(p.sign_flipped);

    const auto q = validate_params(0.7, 0.4, -0.8, 0.4);
    CHECK(q.g1 == 0.8);
    CHECK(q.sign_flipped);
}

TEST_CASE("validate_params rejects non-finite fields by name") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(validate_params(nan, 0.4, 0.8, 0.4), doctest::Contains("delta1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate_params(0.7, 0.4, 0.8, std::numeric_limits<double>::infinity()),
                         doctest::Contains("g2"), std::invalid_argument);
}

TEST_CASE("derived_couplings") {
    CHECK(derived_couplings(validate_params(0.7, 0.4, 0.8, 0.4)).g_sum == doctest::Approx(1.2));
    CHECK(derived_couplings(validate_params(0.7, 0.4, 0.8, 0.4)).g_diff == doctest::Approx(0.4));
    const auto eq = derived_couplings(validate_params(0.7, 0.4, 0.4, 0.4));
    CHECK(eq.g_sum == 0.8);
    CHECK(eq.g_diff == 0.0);
    const auto zero = derived_couplings(validate_params(0.0, 0.0, 0.0, 0.0));
    CHECK(zero.g_sum == 0.0);
    CHECK(zero.g_diff == 0.0);
}

TEST_CASE("g_sum^2 - g_diff^2 == 4 g1 g2 to one ulp") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const auto p = validate_params(dist(rng), dist(rng), dist(rng), dist(rng));
        const auto d = derived_couplings(p);
        const double lhs = d.g_sum * d.g_sum - d.g_diff * d.g_diff;
        const double rhs = 4.0 * p.g1 * p.g2;
        // the identity cancels the squares, so "last place" refers to the
        // largest intermediate g_sum^2
        const double s2 = d.g_sum * d.g_sum;
        const double ulp =
            std::nextafter(s2, std::numeric_limits<double>::infinity()) - s2;
        // four roundings feed the comparison (two squarings, the subtraction,
        // and the product), each worth up to one unit in that last place
        CHECK(std::abs(lhs - rhs) <= 4 * ulp + std::numeric_limits<double>::denorm_min());
    }
}

TEST_CASE("classify_regime") {
    CHECK(classify_regime(validate_params(0.7, 0.4, 0.8, 0.4)) == Regime::general);
    CHECK(classify_regime(validate_params(0.7, 0.4, 0.4, 0.4)) == Regime::equal_coupling);
    CHECK(classify_regime(validate_params(0.7, 0.4, 0.5, 0.0)) == Regime::single_qubit_like);
    CHECK(classify_regime(validate_params(0.7, 0.4, 0.0, 0.0)) == Regime::zero_coupling);
    // deterministic and total over random valid params
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(0.0, 1.5);
    for (int i = 0; i < 200; ++i) {
        const auto p = validate_params(dist(rng), dist(rng), dist(rng), dist(rng));
        CHECK(classify_regime(p) == classify_regime(p));
    }
}

TEST_CASE("sign canonicalization leaves the oracle spectrum unchanged") {
    // Coupling-sign flips preserve each parity sector; splitting-sign flips
    // preserve the combined spectrum (the conjugating rotation anticommutes
    // with the parity operator, so the sector labels swap).
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    auto combined = [](const ModelParams& p) {
        auto both = oracle::levels(p, Parity::even, 60);
        const auto odd = oracle::levels(p, Parity::odd, 60);
        both.insert(both.end(), odd.begin(), odd.end());
        std::sort(both.begin(), both.end());
        return both;
    };
    for (int i = 0; i < 4; ++i) {
        const double d1 = dist(rng), d2 = dist(rng), g1 = dist(rng), g2 = dist(rng);
        const auto canonical = validate_params(d1, d2, g1, g2);
        const auto g_flipped = validate_params(d1, d2, -g1, g2);
        for (Parity parity : {Parity::even, Parity::odd}) {
            const auto a = oracle::levels(canonical, parity, 60);
            const auto b = oracle::levels(g_flipped, parity, 60);
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < 12; ++k) {
                CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
            }
        }
        const auto all_flipped = validate_params(-d1, -d2, -g1, -g2);
        const auto a = combined(canonical);
        const auto b = combined(all_flipped);
        for (std::size_t k = 0; k < 24; ++k) {
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
        }
    }
}
