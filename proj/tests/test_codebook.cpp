#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <utility>

#include "ssc/codebook.hpp"
#include "ssc/geometry.hpp"

using ssc::Codebook;

TEST_CASE("grid angles") {
    const auto two = ssc::grid_angles(2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(ssc::grid_sin(3, 4) == doctest::Approx(0.0).epsilon(1e-15));

    const auto fine = ssc::grid_angles(360);
    CHECK(fine.front() == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-12));
    for (std::size_t n = 1; n < fine.size(); ++n) {
        CHECK(std::sin(fine[n]) - std::sin(fine[n - 1]) ==
              doctest::Approx(2.0 / 360).epsilon(1e-9));
    }
}

TEST_CASE("alpha of index") {
    CHECK(std::abs(ssc::alpha_of_index(1, 360) - std::complex<double>{-1.0, 0.0}) < 1e-12);
    CHECK(std::abs(ssc::alpha_of_index(181, 360) - std::complex<double>{1.0, 0.0}) < 1e-12);

    // alpha_2^360 walks back to 1 (exact integer exponent bookkeeping).
    const ssc::cplx alpha2 = ssc::alpha_of_index(2, 360);
    const ssc::cplx expected = std::polar(1.0, std::numbers::pi * (-1.0 + 2.0 / 360));
    CHECK(std::abs(alpha2 - expected) < 1e-12);
    ssc::cplx power{1.0, 0.0};
    for (int i = 0; i < 360; ++i) power *= alpha2;
    CHECK(std::abs(power - ssc::cplx{1.0, 0.0}) < 1e-10);

    // Injective over the grid.
    std::set<std::pair<double, double>> seen;
    for (ssc::GridIndex n = 1; n <= 360; ++n) {
        const auto a = ssc::alpha_of_index(n, 360);
        seen.insert({a.real(), a.imag()});
    }
    CHECK(seen.size() == 360);

    CHECK_THROWS_AS(ssc::alpha_of_index(0, 360), std::invalid_argument);
    CHECK_THROWS_AS(ssc::alpha_of_index(361, 360), std::invalid_argument);
}

TEST_CASE("codeword at alpha = 1 is the normalized all-ones vector") {
    // unit_root(0) = 1 regardless of the geometry, so every entry collapses
    // to 1/sqrt(M).
    const ssc::cplx one = ssc::unit_root(0, 6);
    CHECK(one == ssc::cplx{1.0, 0.0});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const std::uint32_t d : {0u, 1u}) {
        const ssc::cplx entry = inv_sqrt2 * ssc::unit_root(0 * d, 6);
        CHECK(std::abs(entry - ssc::cplx{inv_sqrt2, 0.0}) < 1e-15);
    }
}

TEST_CASE("codebook invariants for built geometries") {
    for (const std::uint32_t m : {3u, 5u, 7u, 19u}) {
        CAPTURE(m);
        const auto geom = ssc::bose_chowla_set(m);
        const Codebook book = Codebook::build(geom);
        const std::uint32_t n_points = book.size();
        REQUIRE(n_points == m * m - 1);

        const double entry_mod = 1.0 / std::sqrt(double(m));
        for (ssc::GridIndex n = 1; n <= n_points; ++n) {
            double norm_sq = 0.0;
            for (std::uint32_t a = 0; a < m; ++a) {
                const ssc::cplx w = book.entry(n, a);
                CHECK(std::abs(std::abs(w) - entry_mod) < 1e-12);
                norm_sq += std::norm(w);
            }
            CHECK(std::abs(norm_sq - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("entries match alpha powers") {
    const auto geom = ssc::bose_chowla_set(7);
    const Codebook book = Codebook::build(geom);
    const double scale = 1.0 / std::sqrt(7.0);
    for (ssc::GridIndex n = 1; n <= book.size(); n += 5) {
        const ssc::cplx alpha = ssc::alpha_of_index(n, book.size());
        for (std::uint32_t a = 0; a < 7; ++a) {
            const ssc::cplx direct = scale * std::pow(alpha, double(geom.positions[a]));
            CHECK(std::abs(book.entry(n, a) - direct) < 1e-10);
        }
    }
}

TEST_CASE("M=19: all 360 codewords are pairwise distinct") {
    const Codebook book = Codebook::build(ssc::bose_chowla_set(19));
    for (ssc::GridIndex i = 1; i <= book.size(); ++i) {
        for (ssc::GridIndex j = i + 1; j <= book.size(); ++j) {
            double max_diff = 0.0;
            for (std::uint32_t a = 0; a < 19; ++a) {
                max_diff = std::max(max_diff, std::abs(book.entry(i, a) - book.entry(j, a)));
            }
            if (max_diff < 1e-9) {
                CAPTURE(i);
                CAPTURE(j);
                FAIL("duplicate codewords");
            }
        }
    }
}

TEST_CASE("build is deterministic") {
    const auto geom = ssc::bose_chowla_set(5);
    const Codebook a = Codebook::build(geom);
    const Codebook b = Codebook::build(geom);
    CHECK(a.planar().re == b.planar().re);
    CHECK(a.planar().im == b.planar().im);
}
