#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ssc/codebook.hpp"
#include "ssc/geometry.hpp"

namespace ssc {

enum class SourceMode {
    fixed_unit,    // x = 1
    random_phase,  // x = exp(j*phi), phi uniform in [0, 2*pi)
};

struct ChannelConfig {
    double snr_db = 10.0;  // +infinity means noiseless (sigma = 0)
    SourceMode source_mode = SourceMode::fixed_unit;
    std::uint64_t seed = 0;
    std::uint64_t substream = 0;
};

struct ReceivedSignal {
    std::vector<cplx> y;
    GridIndex true_index = 0;
    double snr_db = 0.0;
    cplx x_used{1.0, 0.0};
};

/// Counter-seeded xoshiro256++ stream. Every (seed, substream) pair names an
/// independent stream, so Monte Carlo trials can be assigned streams up
/// front and run in any order on any number of threads. All derived draws
/// (uniforms, Gaussians via Box-Muller) are computed explicitly and are
/// bit-stable across standard libraries.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t substream);

    std::uint64_t next();
    double uniform01();                       // [0, 1)
    std::uint64_t below(std::uint64_t bound); // [0, bound)
    std::pair<double, double> gaussian_pair();// two standard normals

private:
    std::uint64_t s_[4];
};

/// Derive a fresh substream id from two components (e.g. SNR point, trial).
std::uint64_t mix_substream(std::uint64_t a, std::uint64_t b);

/// Complex noise amplitude: sigma with sigma^2 = 10^(-snr_db/10); 0 when
/// snr_db is +infinity. Per-component real variance is sigma^2/2.
double noise_sigma(double snr_db);

/// Array manifold h(theta_n): h_m = alpha_n^{d_m}, unit modulus, equal to
/// sqrt(M) times the codebook word.
std::vector<cplx> manifold(const ArrayGeometry& geom, GridIndex n);

/// y = h(theta_n)*x + w with w i.i.d. circular complex Gaussian of complex
/// variance sigma^2. Deterministic in (seed, substream); the source phase is
/// drawn before the noise in both modes, so fixed_unit and random_phase
/// signals from the same substream share the identical noise realization.
ReceivedSignal transmit(const ArrayGeometry& geom, GridIndex n, const ChannelConfig& cfg);

}  // namespace ssc
