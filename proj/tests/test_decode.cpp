#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <vector>

#include "ssc/channel.hpp"
#include "ssc/decode.hpp"
#include "ssc/distance.hpp"

using ssc::Codebook;
using ssc::SourceMode;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ssc::cplx> noiseless(const ssc::ArrayGeometry& geom, ssc::GridIndex n) {
    return ssc::manifold(geom, n);
}

}  // namespace

TEST_CASE("quantize_phase") {
    CHECK(ssc::quantize_phase({1.0, 0.0}, 360) == 0);
    CHECK(ssc::quantize_phase({1.0, 0.0}, 7) == 0);
    CHECK(ssc::quantize_phase(std::polar(1.0, 2.0 * std::numbers::pi * 5.0 / 360.0), 360) == 5);
    // Rounding past the top of the circle wraps to 0.
    CHECK(ssc::quantize_phase(std::polar(1.0, 2.0 * std::numbers::pi * 359.6 / 360.0), 360) ==
          0);
    CHECK(ssc::quantize_phase(std::polar(2.5, -0.001), 360) == 0);  // magnitude irrelevant
    CHECK_THROWS_AS(ssc::quantize_phase({0.0, 0.0}, 360), std::invalid_argument);
    CHECK_THROWS_AS(ssc::quantize_phase({1.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("congruence candidates: closed form") {
    CHECK(ssc::solve_vote_congruence(5, 1, 360) == std::vector<std::uint32_t>{5});
    CHECK(ssc::solve_vote_congruence(0, 4, 8) == std::vector<std::uint32_t>{0, 2, 4, 6});
    // Identity geometry, quantized point 3 on an 8-circle: the residue is 3.
    const std::uint32_t t = ssc::quantize_phase(std::polar(1.0, 2.0 * std::numbers::pi * 3.0 / 8.0), 8);
    CHECK(t == 3);
    CHECK(ssc::solve_vote_congruence(t, 1, 8) == std::vector<std::uint32_t>{3});
}

TEST_CASE("closed form equals the literal scan, exhaustively for N <= 64") {
    for (std::uint32_t n = 2; n <= 64; ++n) {
        for (std::uint32_t d = 1; d < n; ++d) {
            const std::uint32_t circle = n / std::gcd(d, n);
            for (std::uint32_t t = 0; t < circle; ++t) {
                const auto fast = ssc::solve_vote_congruence(t, d, n);
                const auto slow = ssc::scan_vote_congruence(t, d, n);
                REQUIRE(fast.size() == std::gcd(d, n));
                CHECK(std::set<std::uint32_t>(fast.begin(), fast.end()) ==
                      std::set<std::uint32_t>(slow.begin(), slow.end()));
            }
        }
    }
}

TEST_CASE("closed form equals the literal scan on random large cases") {
    ssc::Rng rng(2718, 0);
    for (int i = 0; i < 2000; ++i) {
        const std::uint32_t n = std::uint32_t(rng.below(2000)) + 2;
        const std::uint32_t d = std::uint32_t(rng.below(n - 1)) + 1;
        const std::uint32_t circle = n / std::gcd(d, n);
        const std::uint32_t t = std::uint32_t(rng.below(circle));
        const auto fast = ssc::solve_vote_congruence(t, d, n);
        const auto slow = ssc::scan_vote_congruence(t, d, n);
        CHECK(std::set<std::uint32_t>(fast.begin(), fast.end()) ==
              std::set<std::uint32_t>(slow.begin(), slow.end()));
    }
}

TEST_CASE("noiseless exactness for all five decoders") {
    // MAP and geometric are exact for every geometry; the modified family
    // is exact whenever the quantization window cannot alias votes (k = 2
    // here). The window decoder's first stage needs the inter-codeword
    // correlation 1/sqrt(M) to be small: z = 2 is exact from m = 7 up,
    // z = 3 and 5 only for larger m (m = 19 covered in the acceptance run).
    for (const std::uint32_t m : {5u, 7u}) {
        CAPTURE(m);
        const auto geom = ssc::bose_chowla_set(m);
        const Codebook book = Codebook::build(geom);
        const std::uint32_t n_points = book.size();

        const ssc::MapDecoder map(book);
        const ssc::GeometricDecoder geometric(geom);
        const ssc::ModifiedGeometricDecoder modified(geom, 2);
        const ssc::GeoReducedMapDecoder grmap(geom, book, 2, n_points / 2);
        std::vector<ssc::WindowDecoder> windows;
        if (m >= 7) windows.emplace_back(book, 2);

        for (ssc::GridIndex n = 1; n <= n_points; ++n) {
            const auto y = noiseless(geom, n);
            CHECK(map.decode(y).estimated_index == n);
            CHECK(geometric.decode(y).estimated_index == n);
            CHECK(modified.decode(y).estimated_index == n);
            CHECK(grmap.decode(y).estimated_index == n);
            for (const auto& w : windows) CHECK(w.decode(y).estimated_index == n);
        }
    }
}

TEST_CASE("noiseless exactness at the reference operating point, all windows") {
    const auto geom = ssc::bose_chowla_set(19);
    const Codebook book = Codebook::build(geom);
    const ssc::ModifiedGeometricDecoder modified(geom, 9);
    const ssc::GeoReducedMapDecoder grmap(geom, book, 9, 180);
    std::vector<ssc::WindowDecoder> windows;
    for (const std::uint32_t z : {2u, 3u, 5u}) windows.emplace_back(book, z);

    for (ssc::GridIndex n = 1; n <= book.size(); ++n) {
        const auto y = noiseless(geom, n);
        CHECK(modified.decode(y).estimated_index == n);
        CHECK(grmap.decode(y).estimated_index == n);
        for (const auto& w : windows) CHECK(w.decode(y).estimated_index == n);
    }
}

TEST_CASE("noiseless: true residue is always among an r>1 antenna's candidates") {
    const auto geom = ssc::bose_chowla_set(19);
    const auto gcds = ssc::gcd_table(geom);
    const std::uint32_t n_points = geom.modulus;
    bool saw_r_above_one = false;
    for (ssc::GridIndex n = 1; n <= n_points; ++n) {
        const auto y = noiseless(geom, n);
        const std::uint32_t exponent = (n - 1 + n_points / 2) % n_points;
        for (std::uint32_t a = 0; a < geom.m; ++a) {
            if (gcds[a] == 1) continue;
            saw_r_above_one = true;
            const std::uint32_t circle = n_points / gcds[a];
            const std::uint32_t t = ssc::quantize_phase(y[a], circle);
            const auto candidates = ssc::solve_vote_congruence(t, geom.positions[a], n_points);
            CHECK(std::find(candidates.begin(), candidates.end(), exponent) !=
                  candidates.end());
        }
    }
    CHECK(saw_r_above_one);
}

TEST_CASE("degeneracy identities on noisy instances") {
    const auto geom = ssc::bose_chowla_set(7);
    const Codebook book = Codebook::build(geom);
    const std::uint32_t n_points = book.size();

    const ssc::MapDecoder map(book);
    const ssc::WindowDecoder window1(book, 1);
    const ssc::GeometricDecoder geometric(geom);
    const ssc::ModifiedGeometricDecoder modgeo0(geom, 0);
    const ssc::ModifiedGeometricDecoder modgeo3(geom, 3);
    const ssc::GeoReducedMapDecoder grmap_full(geom, book, 3, n_points);
    const ssc::GeoReducedMapDecoder grmap_one(geom, book, 3, 1);

    for (std::uint64_t trial = 0; trial < 400; ++trial) {
        const ssc::GridIndex n = ssc::GridIndex(trial % n_points) + 1;
        const auto sig = ssc::transmit(geom, n, {5.0, SourceMode::fixed_unit, 404, trial});
        CHECK(window1.decode(sig.y).estimated_index == map.decode(sig.y).estimated_index);
        CHECK(modgeo0.decode(sig.y).estimated_index ==
              geometric.decode(sig.y).estimated_index);
        CHECK(grmap_full.decode(sig.y).estimated_index ==
              map.decode(sig.y).estimated_index);
        CHECK(grmap_one.decode(sig.y).estimated_index ==
              modgeo3.decode(sig.y).estimated_index);
    }
}

TEST_CASE("window z=N equals MAP") {
    const auto geom = ssc::bose_chowla_set(5);
    const Codebook book = Codebook::build(geom);
    const ssc::MapDecoder map(book);
    const ssc::WindowDecoder window_full(book, book.size());
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto sig =
            ssc::transmit(geom, ssc::GridIndex(trial % book.size()) + 1,
                          {3.0, SourceMode::random_phase, 11, trial});
        const auto w = window_full.decode(sig.y);
        CHECK(w.estimated_index == map.decode(sig.y).estimated_index);
        CHECK(w.candidates_examined == 1 + book.size());
    }
}

TEST_CASE("MAP and window are phase invariant") {
    const auto geom = ssc::bose_chowla_set(7);
    const Codebook book = Codebook::build(geom);
    const ssc::MapDecoder map(book);
    const ssc::WindowDecoder window(book, 2);

    ssc::Rng rng(8, 8);
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        const auto sig = ssc::transmit(geom, ssc::GridIndex(rng.below(book.size())) + 1,
                                       {2.0, SourceMode::fixed_unit, 21, trial});
        const ssc::cplx rotation = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform01());
        std::vector<ssc::cplx> rotated(sig.y.size());
        for (std::size_t i = 0; i < sig.y.size(); ++i) rotated[i] = rotation * sig.y[i];
        CHECK(map.decode(sig.y).estimated_index == map.decode(rotated).estimated_index);
        CHECK(window.decode(sig.y).estimated_index ==
              window.decode(rotated).estimated_index);
    }
}

TEST_CASE("MAP equals brute-force minimum subspace distance decoding") {
    const auto geom = ssc::bose_chowla_set(7);
    const Codebook book = Codebook::build(geom);
    const ssc::MapDecoder map(book);

    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        const double snr = -5.0 + 20.0 * (trial % 11) / 10.0;
        const auto sig = ssc::transmit(geom, ssc::GridIndex(trial % book.size()) + 1,
                                       {snr, SourceMode::random_phase, 31, trial});

        // Normalize, then scan subspaces with the distance module.
        double norm_sq = 0.0;
        for (const auto& v : sig.y) norm_sq += std::norm(v);
        REQUIRE(norm_sq > 0.0);
        std::vector<ssc::cplx> unit(sig.y.size());
        for (std::size_t i = 0; i < sig.y.size(); ++i) unit[i] = sig.y[i] / std::sqrt(norm_sq);

        ssc::GridIndex best = 0;
        double best_dist = 2.0;
        for (ssc::GridIndex n = 1; n <= book.size(); ++n) {
            const double dist = ssc::pair_distance(unit, book.word(n));
            if (dist < best_dist) {
                best_dist = dist;
                best = n;
            }
        }
        CHECK(map.decode(sig.y).estimated_index == best);
    }
}

TEST_CASE("tie-break contracts on the zero signal") {
    const auto geom = ssc::bose_chowla_set(5);
    const Codebook book = Codebook::build(geom);
    const std::vector<ssc::cplx> zero(5, ssc::cplx{0.0, 0.0});

    CHECK(ssc::MapDecoder(book).decode(zero).estimated_index == 1);
    CHECK(ssc::WindowDecoder(book, 2).decode(zero).estimated_index == 1);
    // Every antenna abstains: the vote decoders cannot answer.
    CHECK_THROWS_AS(ssc::GeometricDecoder(geom).decode(zero), std::runtime_error);
    CHECK_THROWS_AS(ssc::GeoReducedMapDecoder(geom, book, 2, 12).decode(zero),
                    std::runtime_error);
}

TEST_CASE("zero-valued antennas abstain without killing the decode") {
    const auto geom = ssc::bose_chowla_set(5);
    const auto gcds = ssc::gcd_table(geom);
    auto y = noiseless(geom, 17);
    y[2] = {0.0, 0.0};
    const auto outcome = ssc::GeometricDecoder(geom).decode(y);
    CHECK(outcome.estimated_index == 17);
    std::uint64_t expected_votes = 0;
    for (std::uint32_t a = 0; a < 5; ++a) {
        if (a != 2) expected_votes += gcds[a];
    }
    CHECK(outcome.total_votes == expected_votes);
}

TEST_CASE("work accounting") {
    const auto geom = ssc::bose_chowla_set(19);
    const Codebook book = Codebook::build(geom);
    const std::uint32_t n_points = book.size();
    const auto sig = ssc::transmit(geom, 42, {5.0, SourceMode::fixed_unit, 7, 7});

    CHECK(ssc::MapDecoder(book).decode(sig.y).candidates_examined == n_points);
    for (const std::uint32_t z : {2u, 3u, 5u}) {
        CHECK(ssc::WindowDecoder(book, z).decode(sig.y).candidates_examined ==
              n_points / z + z);
    }
    for (const std::uint32_t g : {1u, 180u, 360u}) {
        CHECK(ssc::GeoReducedMapDecoder(geom, book, 9, g).decode(sig.y).candidates_examined ==
              g);
    }
    CHECK(ssc::GeometricDecoder(geom).decode(sig.y).candidates_examined == 0);
}

TEST_CASE("window with z not dividing N uses a short final window") {
    const auto geom = ssc::bose_chowla_set(5);  // N = 24
    const Codebook book = Codebook::build(geom);
    const ssc::WindowDecoder window(book, 7);  // windows of 7,7,7,3
    CHECK(window.window_count() == 4);
    const auto sig = ssc::transmit(geom, 24, {kInf, SourceMode::fixed_unit, 1, 1});
    const auto outcome = window.decode(sig.y);
    CHECK(outcome.estimated_index >= 1);
    CHECK(outcome.estimated_index <= 24);
    CHECK(outcome.window_index >= 1);
    // Last window carries only N mod z = 3 codewords.
    if (outcome.window_index == 4) {
        CHECK(outcome.candidates_examined == 4 + 3);
    } else {
        CHECK(outcome.candidates_examined == 4 + 7);
    }
}

TEST_CASE("saturated quantization window votes every index") {
    const auto geom = ssc::bose_chowla_set(5);
    const std::uint32_t n_points = geom.modulus;
    const ssc::ModifiedGeometricDecoder saturated(geom, n_points);  // k >= circle/2 everywhere
    const auto sig = ssc::transmit(geom, 9, {10.0, SourceMode::fixed_unit, 3, 3});
    const auto first = saturated.decode(sig.y);
    CHECK(first.distinct_voted == n_points);
    // Deterministic: same input, same answer.
    CHECK(saturated.decode(sig.y).estimated_index == first.estimated_index);
    // 2k+1 is odd while the circles divide the even N, so the vote counts
    // cannot all be equal; the win must still go to a maximal count with the
    // smallest index.
    ssc::DecodeTrace trace;
    saturated.decode(sig.y, &trace);
    const std::uint32_t winner = first.estimated_index - 1;
    for (std::uint32_t slot = 0; slot < n_points; ++slot) {
        if (trace.vote_counts[slot] > trace.vote_counts[winner]) FAIL("not a mode");
        if (trace.vote_counts[slot] == trace.vote_counts[winner]) {
            CHECK(winner <= slot);
            break;
        }
    }
}

TEST_CASE("antenna subsets restrict the vote loop") {
    const auto geom = ssc::bose_chowla_set(19);
    const auto gcds = ssc::gcd_table(geom);

    const auto subset = ssc::low_gcd_antennas(geom, 9);
    REQUIRE(subset.size() == 9);
    // The chosen antennas have the smallest gcd values.
    std::vector<std::uint32_t> sorted_gcds = gcds;
    std::sort(sorted_gcds.begin(), sorted_gcds.end());
    for (const auto a : subset) CHECK(gcds[a] <= sorted_gcds[8]);

    const ssc::GeometricDecoder restricted(geom, subset);
    std::uint64_t expected_votes = 0;
    for (const auto a : subset) expected_votes += gcds[a];

    for (ssc::GridIndex n = 1; n <= geom.modulus; n += 13) {
        const auto y = noiseless(geom, n);
        const auto outcome = restricted.decode(y);
        CHECK(outcome.estimated_index == n);
        CHECK(outcome.total_votes == expected_votes);
    }

    CHECK_THROWS_AS(ssc::low_gcd_antennas(geom, 0), std::invalid_argument);
    CHECK_THROWS_AS(ssc::low_gcd_antennas(geom, 20), std::invalid_argument);
    CHECK_THROWS_AS(ssc::GeometricDecoder(geom, {42}), std::invalid_argument);
}

TEST_CASE("odd modulus is rejected for the geometric family") {
    ssc::ArrayGeometry tiny;
    tiny.m = 2;
    tiny.modulus = 3;
    tiny.positions = {1, 2};
    REQUIRE(ssc::verify_sidon(tiny));
    CHECK_THROWS_AS(ssc::GeometricDecoder{tiny}, std::invalid_argument);
}

TEST_CASE("length mismatches are rejected") {
    const auto geom = ssc::bose_chowla_set(5);
    const Codebook book = Codebook::build(geom);
    const std::vector<ssc::cplx> wrong(4, ssc::cplx{1.0, 0.0});
    CHECK_THROWS_AS(ssc::MapDecoder(book).decode(wrong), std::invalid_argument);
    CHECK_THROWS_AS(ssc::GeometricDecoder(geom).decode(wrong), std::invalid_argument);
}

TEST_CASE("one-shot helpers agree with the decoder objects") {
    const auto geom = ssc::bose_chowla_set(5);
    const Codebook book = Codebook::build(geom);
    const auto sig = ssc::transmit(geom, 11, {4.0, SourceMode::fixed_unit, 6, 6});
    CHECK(ssc::decode_map(sig.y, book).estimated_index ==
          ssc::MapDecoder(book).decode(sig.y).estimated_index);
    CHECK(ssc::decode_window(sig.y, book, 3).estimated_index ==
          ssc::WindowDecoder(book, 3).decode(sig.y).estimated_index);
    CHECK(ssc::decode_geometric(sig.y, geom).estimated_index ==
          ssc::GeometricDecoder(geom).decode(sig.y).estimated_index);
    CHECK(ssc::decode_modified_geometric(sig.y, geom, 2).estimated_index ==
          ssc::ModifiedGeometricDecoder(geom, 2).decode(sig.y).estimated_index);
    CHECK(ssc::decode_geo_reduced_map(sig.y, geom, book, 2, 12).estimated_index ==
          ssc::GeoReducedMapDecoder(geom, book, 2, 12).decode(sig.y).estimated_index);
}
