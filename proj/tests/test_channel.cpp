#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ssc/channel.hpp"
#include "ssc/codebook.hpp"

using ssc::ChannelConfig;
using ssc::SourceMode;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("manifold properties") {
    const auto geom = ssc::bose_chowla_set(7);
    const std::uint32_t n_points = geom.modulus;

    // alpha = 1 at n = N/2 + 1: the manifold is all ones.
    const auto flat = ssc::manifold(geom, n_points / 2 + 1);
    for (const auto& h : flat) CHECK(std::abs(h - ssc::cplx{1.0, 0.0}) < 1e-12);

    const ssc::Codebook book = ssc::Codebook::build(geom);
    const double sqrt_m = std::sqrt(double(geom.m));
    for (ssc::GridIndex n = 1; n <= n_points; n += 7) {
        const auto h = ssc::manifold(geom, n);
        double norm_sq = 0.0;
        for (std::uint32_t a = 0; a < geom.m; ++a) {
            CHECK(std::abs(std::abs(h[a]) - 1.0) < 1e-12);
            norm_sq += std::norm(h[a]);
            // h = sqrt(M) * codeword, entry by entry.
            CHECK(std::abs(h[a] - sqrt_m * book.entry(n, a)) < 1e-12);
        }
        CHECK(std::abs(norm_sq - double(geom.m)) < 1e-9);
    }
}

TEST_CASE("noiseless transmit returns the manifold exactly") {
    const auto geom = ssc::bose_chowla_set(5);
    const auto sig = ssc::transmit(geom, 3, {kInf, SourceMode::fixed_unit, 1, 2});
    const auto h = ssc::manifold(geom, 3);
    REQUIRE(sig.y.size() == h.size());
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(sig.y[i] == h[i]);
    CHECK(sig.x_used == ssc::cplx{1.0, 0.0});
}

TEST_CASE("transmit is deterministic per (seed, substream)") {
    const auto geom = ssc::bose_chowla_set(5);
    const ChannelConfig cfg{3.0, SourceMode::random_phase, 77, 12345};
    const auto a = ssc::transmit(geom, 9, cfg);
    const auto b = ssc::transmit(geom, 9, cfg);
    CHECK(a.y == b.y);
    CHECK(a.x_used == b.x_used);

    const auto c = ssc::transmit(geom, 9, {3.0, SourceMode::random_phase, 77, 12346});
    CHECK(a.y != c.y);
}

TEST_CASE("fixed and random modes share the same noise stream") {
    const auto geom = ssc::bose_chowla_set(5);
    const auto fixed = ssc::transmit(geom, 4, {5.0, SourceMode::fixed_unit, 9, 100});
    const auto random = ssc::transmit(geom, 4, {5.0, SourceMode::random_phase, 9, 100});
    const auto h = ssc::manifold(geom, 4);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const ssc::cplx w_fixed = fixed.y[i] - h[i] * fixed.x_used;
        const ssc::cplx w_random = random.y[i] - h[i] * random.x_used;
        CHECK(std::abs(w_fixed - w_random) < 1e-12);
    }
}

TEST_CASE("noise statistics at 0 dB") {
    const auto geom = ssc::bose_chowla_set(5);
    const auto h = ssc::manifold(geom, 1);
    const std::size_t trials = 20000;  // 5 antennas -> 1e5 samples

    double sum_sq = 0.0;
    ssc::cplx sum_w2{0.0, 0.0};
    std::size_t count = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto sig =
            ssc::transmit(geom, 1, {0.0, SourceMode::fixed_unit, 2024, t});
        for (std::size_t i = 0; i < h.size(); ++i) {
            const ssc::cplx w = sig.y[i] - h[i];
            sum_sq += std::norm(w);
            sum_w2 += w * w;
            ++count;
        }
    }
    const double var = sum_sq / double(count);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));  // sigma^2 = 1 at 0 dB
    // Circularity: E[w^2] ≈ 0.
    CHECK(std::abs(sum_w2 / double(count)) < 0.01);
}

TEST_CASE("per-antenna SNR matches the definition") {
    const auto geom = ssc::bose_chowla_set(5);
    const auto h = ssc::manifold(geom, 2);
    for (const double snr_db : {-3.0, 6.0}) {
        double noise_power = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < 20000; ++t) {
            const auto sig =
                ssc::transmit(geom, 2, {snr_db, SourceMode::fixed_unit, 5, t});
            for (std::size_t i = 0; i < h.size(); ++i) {
                noise_power += std::norm(sig.y[i] - h[i]);
                ++count;
            }
        }
        // |h_m x|^2 = 1, so SNR = 1 / E|w|^2.
        const double measured_snr = 1.0 / (noise_power / double(count));
        CHECK(10.0 * std::log10(measured_snr) == doctest::Approx(snr_db).epsilon(0.05));
    }
}

TEST_CASE("substreams are uncorrelated") {
    const std::size_t draws = 100000;
    ssc::Rng a(31337, 1);
    ssc::Rng b(31337, 2);
    double sum_a = 0.0, sum_b = 0.0, sum_ab = 0.0, sum_a2 = 0.0, sum_b2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double ga = a.gaussian_pair().first;
        const double gb = b.gaussian_pair().first;
        sum_a += ga;
        sum_b += gb;
        sum_ab += ga * gb;
        sum_a2 += ga * ga;
        sum_b2 += gb * gb;
    }
    const double n = double(draws);
    const double cov = sum_ab / n - (sum_a / n) * (sum_b / n);
    const double corr =
        cov / std::sqrt((sum_a2 / n - sum_a * sum_a / (n * n)) *
                        (sum_b2 / n - sum_b * sum_b / (n * n)));
    CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("random phase is uniform enough and unit modulus") {
    ssc::Rng rng(5, 5);
    const auto geom = ssc::bose_chowla_set(3);
    double mean_re = 0.0, mean_im = 0.0;
    const std::size_t trials = 20000;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto sig = ssc::transmit(geom, 1, {kInf, SourceMode::random_phase, 1, t});
        CHECK(std::abs(std::abs(sig.x_used) - 1.0) < 1e-12);
        mean_re += sig.x_used.real();
        mean_im += sig.x_used.imag();
    }
    CHECK(std::abs(mean_re / double(trials)) < 0.02);
    CHECK(std::abs(mean_im / double(trials)) < 0.02);
}

TEST_CASE("noise sigma handles the sentinel and rejects NaN") {
    CHECK(ssc::noise_sigma(kInf) == 0.0);
    CHECK(ssc::noise_sigma(0.0) == doctest::Approx(1.0));
    CHECK(ssc::noise_sigma(10.0) == doctest::Approx(std::sqrt(0.1)));
    CHECK_THROWS_AS(ssc::noise_sigma(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ssc::noise_sigma(-kInf), std::invalid_argument);
}
