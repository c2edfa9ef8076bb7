#include "ssc/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ssc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t substream) {
    std::uint64_t sm = seed;
    (void)splitmix64(sm);
    sm ^= 0xd2b74407b1ce6e93ULL * substream;
    s_[0] = splitmix64(sm);
    s_[1] = splitmix64(sm);
    s_[2] = splitmix64(sm);
    s_[3] = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() { return double(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    return std::uint64_t((static_cast<unsigned __int128>(next()) * bound) >> 64);
}

std::pair<double, double> Rng::gaussian_pair() {
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = double((next() >> 11) + 1) * 0x1.0p-53;
    const double u2 = double(next() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t mix_substream(std::uint64_t a, std::uint64_t b) {
    std::uint64_t sm = a ^ rotl(b, 32) ^ 0x6a09e667f3bcc909ULL;
    return splitmix64(sm);
}

double noise_sigma(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    if (!std::isfinite(snr_db)) {
        throw std::invalid_argument("snr_db must be finite or +infinity");
    }
    return std::sqrt(std::pow(10.0, -snr_db / 10.0));
}

std::vector<cplx> manifold(const ArrayGeometry& geom, GridIndex n) {
    const std::uint32_t n_points = geom.modulus;
    const std::uint32_t two_n = 2 * n_points;
    const std::uint64_t u = phase_exponent(n, n_points);
    std::vector<cplx> h(geom.m);
    for (std::uint32_t m = 0; m < geom.m; ++m) {
        h[m] = unit_root(u * geom.positions[m] % two_n, two_n);
    }
    return h;
}

ReceivedSignal transmit(const ArrayGeometry& geom, GridIndex n, const ChannelConfig& cfg) {
    Rng rng(cfg.seed, cfg.substream);

    // The phase draw happens in both modes so that the subsequent noise
    // stream is identical whichever mode a decoder family asked for.
    const double phi = 2.0 * std::numbers::pi * rng.uniform01();
    const cplx x = (cfg.source_mode == SourceMode::random_phase)
                       ? std::polar(1.0, phi)
                       : cplx{1.0, 0.0};

    ReceivedSignal sig;
    sig.true_index = n;
    sig.snr_db = cfg.snr_db;
    sig.x_used = x;
    sig.y = manifold(geom, n);

    const double sigma = noise_sigma(cfg.snr_db);
    const double component = sigma / std::numbers::sqrt2;
    for (auto& value : sig.y) {
        value *= x;
        if (sigma > 0.0) {
            const auto [g_re, g_im] = rng.gaussian_pair();
            value += cplx{component * g_re, component * g_im};
        }
    }
    return sig;
}

}  // namespace ssc
