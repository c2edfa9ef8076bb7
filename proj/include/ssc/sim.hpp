#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssc/channel.hpp"
#include "ssc/codebook.hpp"
#include "ssc/decode.hpp"
#include "ssc/geometry.hpp"

namespace ssc {

enum class DecoderKind { map, window, geometric, modified_geometric, geo_reduced_map };

struct DecoderSpec {
    DecoderKind kind = DecoderKind::map;
    std::uint32_t z = 2;       // window size
    std::uint32_t k = 9;       // quantization half-width
    std::uint32_t g = 0;       // shortlist size; 0 means N/2
    std::uint32_t subset = 0;  // low-gcd antenna subset size; 0 means all
    std::optional<SourceMode> source_mode;  // override the family default
};

std::string decoder_label(const DecoderSpec& spec);

/// Parse "name[:key=val...]": map, window[:z=..], geometric,
/// modgeo[:k=..], grmap[:k=..][:g=..]; every kind accepts subset=<count>.
/// Throws std::invalid_argument on unknown names/keys.
DecoderSpec parse_decoder_spec(std::string_view text);

struct SweepPlan {
    std::uint32_t m = 19;
    std::optional<ArrayGeometry> geometry;  // built from m when absent
    std::vector<double> snr_db;
    std::uint32_t trials = 10000;
    std::vector<DecoderSpec> decoders;
    std::uint64_t seed = 42;
    std::uint32_t threads = 0;  // 0: hardware concurrency
    bool measure_time = true;   // false writes 0 for mean_decode_ns
};

struct SweepCell {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double p_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_decode_ns = 0.0;
    double mean_candidates = 0.0;
};

struct SweepResult {
    SweepPlan plan;  // echoed, geometry resolved
    std::vector<SourceMode> mode_used;          // per decoder
    std::vector<std::vector<SweepCell>> cells;  // [decoder][snr point]
};

/// Wilson 95% score interval for errors/trials.
std::pair<double, double> wilson_ci95(std::uint64_t errors, std::uint64_t trials);

/// Seeded sweep: per trial, draw a uniform true index and one channel
/// realization, run every decoder on that same realization (paired
/// comparison), and count index errors. The (index, phase, noise) sequence
/// depends only on (seed, SNR point, trial number) — never on the decoder
/// set or the thread count. MAP/window decoders see random-phase sources by
/// default, the geometric family x = 1; per-decoder overrides win.
SweepResult run_sweep(const SweepPlan& plan);

/// CSV rows per (decoder, snr): decoder,z,k,g,snr_db,trials,errors,p_err,
/// ci_lo,ci_hi,mean_decode_ns,mean_candidates. Stable contract.
void write_sweep_csv(const SweepResult& result, std::ostream& out, bool with_timestamp);

/// JSON mirror with the full plan echoed.
void write_sweep_json(const SweepResult& result, std::ostream& out);

struct ScalingPoint {
    std::uint32_t m = 0;
    double median_decode_ns = 0.0;
};

struct ScalingSeries {
    DecoderSpec spec;
    std::vector<ScalingPoint> points;
    double log_slope = 0.0;  // least-squares slope of log(time) vs log(m)
};

struct ScalingReport {
    std::vector<ScalingSeries> series;
    std::vector<ScalingPoint> codebook_build;  // one-off build cost per m
    std::uint32_t trials = 0;
    double snr_db = 0.0;
};

/// Median per-decode wall time across antenna counts, with a log-log slope
/// fit per decoder. Decodes are timed in batches sized to dominate clock
/// resolution; a warm-up pass precedes measurement.
ScalingReport runtime_scaling(const std::vector<DecoderSpec>& decoders,
                              const std::vector<std::uint32_t>& m_points, std::uint32_t trials,
                              double snr_db = 10.0, std::uint64_t seed = 42);

void write_scaling_text(const ScalingReport& report, std::ostream& out);
void write_scaling_csv(const ScalingReport& report, std::ostream& out);

}  // namespace ssc
