#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssc/codebook.hpp"
#include "ssc/geometry.hpp"

namespace ssc {

struct DecodeOutcome {
    GridIndex estimated_index = 0;
    /// Codeword correlations evaluated: N for MAP, ceil(N/z) + window size
    /// for the window decoder, min(g, N) for geometric-reduced MAP, 0 for
    /// the vote-only decoders.
    std::uint32_t candidates_examined = 0;
    std::uint32_t window_index = 0;   // window decoder, 1-based; 0 otherwise
    std::uint32_t distinct_voted = 0; // geometric family
    std::uint64_t total_votes = 0;    // geometric family, multiset size
};

/// Optional per-decode diagnostics, filled only when requested.
struct DecodeTrace {
    std::vector<double> scores;              // correlation stage |y^H c|^2
    std::vector<std::uint32_t> vote_counts;  // slot n-1 -> votes
    std::vector<GridIndex> shortlist;        // geometric-reduced MAP
};

/// Nearest grid point of arg(value) on a circle with circle_size marks:
/// floor(arg * circle_size / (2*pi) + 1/2) mod circle_size, arg in [0, 2*pi).
/// Throws std::invalid_argument for value == 0 (phase undefined).
std::uint32_t quantize_phase(cplx value, std::uint32_t circle_size);

/// All residues e in [0, N) with (d/r)*e ≡ t (mod N/r), r = gcd(d, N):
/// closed form e0 + j*(N/r) with e0 = t * (d/r)^{-1} mod N/r. Exactly r
/// candidates. Requires t in [0, N/r).
std::vector<std::uint32_t> solve_vote_congruence(std::uint32_t t, std::uint32_t d,
                                                 std::uint32_t n);

/// Same candidate set via the literal O(N) table scan (build
/// t'_e = e*(d/r) mod N/r for all e, collect matches). Reference oracle for
/// solve_vote_congruence.
std::vector<std::uint32_t> scan_vote_congruence(std::uint32_t t, std::uint32_t d,
                                                std::uint32_t n);

/// Antenna subset policy: indices (0-based) of the `count` antennas with the
/// smallest gcd(d_m, N), ties by position order.
std::vector<std::uint32_t> low_gcd_antennas(const ArrayGeometry& geom, std::uint32_t count);

/// Maximum-correlation decoder: argmax_n |y^H c_n| over the whole codebook.
/// Ties break toward the smaller grid index.
class MapDecoder {
public:
    explicit MapDecoder(const Codebook& book) : book_(&book) {}
    DecodeOutcome decode(std::span<const cplx> y, DecodeTrace* trace = nullptr) const;

private:
    const Codebook* book_;
};

/// Two-stage window decoder: stage 1 correlates against sums of z adjacent
/// codewords to pick a window, stage 2 scans the z codewords inside it.
/// The summed codebook is built once at construction. When z does not
/// divide N the final window holds the N mod z leftover codewords; summed
/// columns are not re-normalized.
class WindowDecoder {
public:
    WindowDecoder(const Codebook& book, std::uint32_t z);

    std::uint32_t z() const { return z_; }
    std::uint32_t window_count() const { return std::uint32_t(summed_.cols); }
    DecodeOutcome decode(std::span<const cplx> y, DecodeTrace* trace = nullptr) const;

private:
    const Codebook* book_;
    std::uint32_t z_ = 0;
    kernels::PlanarMatrix summed_;
};

/// Pre-computed number-theoretic tables shared by the geometric decoder
/// family: per antenna the gcd r = gcd(d, N), the quantization circle N/r,
/// the modular inverse of d/r on that circle, and the base grid slot for
/// every quantization point so the vote loop runs without divisions.
/// Requires even N (the phase grid offsets by half a step otherwise;
/// N = M^2 - 1 is even for every odd prime M).
struct GeometryTables {
    explicit GeometryTables(const ArrayGeometry& geom);

    std::uint32_t n = 0;
    std::uint32_t half = 0;  // N/2, grid-slot offset between exponent and index
    std::vector<std::uint32_t> position;
    std::vector<std::uint32_t> r;
    std::vector<std::uint32_t> circle;
    std::vector<std::uint32_t> inv;
    // slot_base[slot_offset[a] + i] = grid slot of the base solution for
    // quantization point i on antenna a's circle; the remaining r-1
    // solutions follow at strides of circle[a] (mod N).
    std::vector<std::uint32_t> slot_offset;
    std::vector<std::uint32_t> slot_base;
};

/// Per-antenna phase-quantization decoder (majority vote over the candidate
/// grid indices each antenna's phase is consistent with). Zero-valued
/// entries abstain; throws std::runtime_error when every antenna abstained.
class GeometricDecoder {
public:
    explicit GeometricDecoder(const ArrayGeometry& geom,
                              std::vector<std::uint32_t> antenna_subset = {});
    DecodeOutcome decode(std::span<const cplx> y, DecodeTrace* trace = nullptr) const;

private:
    GeometryTables tables_;
    std::vector<std::uint32_t> subset_;
};

/// Geometric decoder with widened quantization: each antenna votes for
/// every grid point within k quantization steps of its phase (wrapping on
/// the circle). k = 0 reproduces GeometricDecoder exactly.
class ModifiedGeometricDecoder {
public:
    ModifiedGeometricDecoder(const ArrayGeometry& geom, std::uint32_t k,
                             std::vector<std::uint32_t> antenna_subset = {});
    std::uint32_t k() const { return k_; }
    DecodeOutcome decode(std::span<const cplx> y, DecodeTrace* trace = nullptr) const;

private:
    GeometryTables tables_;
    std::uint32_t k_ = 0;
    std::vector<std::uint32_t> subset_;
};

/// Vote stage of the modified geometric decoder followed by a reduced MAP
/// stage: correlate only against the g most-voted indices (ties toward the
/// smaller index; zero-vote indices pad the shortlist in ascending order
/// when fewer than g received votes).
class GeoReducedMapDecoder {
public:
    GeoReducedMapDecoder(const ArrayGeometry& geom, const Codebook& book, std::uint32_t k,
                         std::uint32_t g, std::vector<std::uint32_t> antenna_subset = {});
    std::uint32_t k() const { return k_; }
    std::uint32_t g() const { return g_; }
    DecodeOutcome decode(std::span<const cplx> y, DecodeTrace* trace = nullptr) const;

private:
    GeometryTables tables_;
    const Codebook* book_;
    std::uint32_t k_ = 0;
    std::uint32_t g_ = 0;
    std::vector<std::uint32_t> subset_;
};

// One-shot conveniences (build the decoder, decode, discard).
DecodeOutcome decode_map(std::span<const cplx> y, const Codebook& book);
DecodeOutcome decode_window(std::span<const cplx> y, const Codebook& book, std::uint32_t z);
DecodeOutcome decode_geometric(std::span<const cplx> y, const ArrayGeometry& geom);
DecodeOutcome decode_modified_geometric(std::span<const cplx> y, const ArrayGeometry& geom,
                                        std::uint32_t k);
DecodeOutcome decode_geo_reduced_map(std::span<const cplx> y, const ArrayGeometry& geom,
                                     const Codebook& book, std::uint32_t k, std::uint32_t g);

}  // namespace ssc
