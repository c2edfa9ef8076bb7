#include "ssc/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ssc {

namespace {

void check_length(std::size_t got, std::size_t want) {
    if (got != want) {
        throw std::invalid_argument("signal length " + std::to_string(got) +
                                    " does not match antenna count " + std::to_string(want));
    }
}

// Per-thread scratch so the hot decode paths do not allocate. Decoders stay
// safe to call from any number of threads; each thread reuses its own
// buffers.
struct Scratch {
    std::vector<double> scores;
    std::vector<double> stage_scores;
    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> slots;
    std::vector<std::uint32_t> hist;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

std::vector<std::uint32_t>& zeroed_counts(std::uint32_t n) {
    auto& counts = scratch().counts;
    counts.assign(n, 0);
    return counts;
}

}  // namespace

std::uint32_t quantize_phase(cplx value, std::uint32_t circle_size) {
    if (circle_size < 1) throw std::invalid_argument("circle size must be >= 1");
    if (value == cplx{0.0, 0.0}) {
        throw std::invalid_argument("cannot quantize the phase of zero");
    }
    double arg = std::arg(value);
    if (arg < 0.0) arg += 2.0 * std::numbers::pi;
    const auto t =
        std::uint64_t(std::floor(arg * double(circle_size) / (2.0 * std::numbers::pi) + 0.5));
    return std::uint32_t(t % circle_size);
}

std::vector<std::uint32_t> solve_vote_congruence(std::uint32_t t, std::uint32_t d,
                                                 std::uint32_t n) {
    if (n == 0 || d == 0) throw std::invalid_argument("modulus and position must be nonzero");
    const std::uint32_t r = std::gcd(d, n);
    const std::uint32_t circle = n / r;
    if (t >= circle) {
        throw std::invalid_argument("quantized point " + std::to_string(t) +
                                    " outside circle of size " + std::to_string(circle));
    }
    const auto inv = mod_inverse(d / r, circle);  // gcd(d/r, N/r) = 1, always present
    const std::uint32_t base = std::uint32_t(std::uint64_t(*inv) * t % circle);
    std::vector<std::uint32_t> out;
    out.reserve(r);
    for (std::uint32_t j = 0; j < r; ++j) out.push_back(base + j * circle);
    return out;
}

std::vector<std::uint32_t> scan_vote_congruence(std::uint32_t t, std::uint32_t d,
                                                std::uint32_t n) {
    if (n == 0 || d == 0) throw std::invalid_argument("modulus and position must be nonzero");
    const std::uint32_t r = std::gcd(d, n);
    const std::uint32_t circle = n / r;
    if (t >= circle) {
        throw std::invalid_argument("quantized point " + std::to_string(t) +
                                    " outside circle of size " + std::to_string(circle));
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = 0; e < n; ++e) {
        if (std::uint64_t(e) * (d / r) % circle == t) out.push_back(e);
    }
    return out;
}

std::vector<std::uint32_t> low_gcd_antennas(const ArrayGeometry& geom, std::uint32_t count) {
    if (count == 0 || count > geom.m) {
        throw std::invalid_argument("antenna subset size must be in [1, M]");
    }
    const auto gcds = gcd_table(geom);
    std::vector<std::uint32_t> order(geom.m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return gcds[a] < gcds[b]; });
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

// ---------------------------------------------------------------------------
// MAP

DecodeOutcome MapDecoder::decode(std::span<const cplx> y, DecodeTrace* trace) const {
    check_length(y.size(), book_->antennas());
    const std::uint32_t n = book_->size();
    auto& scores = scratch().scores;
    scores.resize(n);
    kernels::corr_abs2(y.data(), book_->planar(), scores.data());

    DecodeOutcome out;
    out.estimated_index = GridIndex(kernels::argmax_lowest(scores.data(), n)) + 1;
    out.candidates_examined = n;
    if (trace) trace->scores = scores;
    return out;
}

// ---------------------------------------------------------------------------
// Window

WindowDecoder::WindowDecoder(const Codebook& book, std::uint32_t z) : book_(&book), z_(z) {
    if (z < 1) throw std::invalid_argument("window size must be >= 1");
    const std::uint32_t n = book.size();
    const std::uint32_t m = book.antennas();
    const std::uint32_t windows = (n + z - 1) / z;
    summed_ = kernels::PlanarMatrix(m, windows);
    const auto& words = book.planar();
    for (std::uint32_t v = 0; v < windows; ++v) {
        const std::uint32_t begin = v * z;
        const std::uint32_t end = std::min(begin + z, n);
        for (std::uint32_t a = 0; a < m; ++a) {
            cplx sum{0.0, 0.0};
            for (std::uint32_t q = begin; q < end; ++q) sum += words.at(a, q);
            summed_.set(a, v, sum);
        }
    }
}

DecodeOutcome WindowDecoder::decode(std::span<const cplx> y, DecodeTrace* trace) const {
    check_length(y.size(), book_->antennas());
    const std::uint32_t n = book_->size();
    const std::uint32_t windows = window_count();
    auto& s = scratch();

    s.stage_scores.resize(windows);
    kernels::corr_abs2(y.data(), summed_, s.stage_scores.data());
    const std::uint32_t v =
        std::uint32_t(kernels::argmax_lowest(s.stage_scores.data(), windows));

    const std::uint32_t begin = v * z_;
    const std::uint32_t end = std::min(begin + z_, n);
    const std::uint32_t width = end - begin;
    s.slots.resize(width);
    std::iota(s.slots.begin(), s.slots.end(), begin);
    s.scores.resize(width);
    kernels::corr_abs2_subset(y.data(), book_->planar(), s.slots.data(), width,
                              s.scores.data());

    DecodeOutcome out;
    out.estimated_index =
        begin + GridIndex(kernels::argmax_lowest(s.scores.data(), width)) + 1;
    out.candidates_examined = windows + width;
    out.window_index = v + 1;
    if (trace) trace->scores = s.scores;
    return out;
}

// ---------------------------------------------------------------------------
// Geometric family

GeometryTables::GeometryTables(const ArrayGeometry& geom)
    : n(geom.modulus), half(geom.modulus / 2), position(geom.positions) {
    validate_geometry(geom);
    if (n % 2 != 0) {
        throw std::invalid_argument(
            "geometric decoders need an even grid modulus (odd prime M)");
    }
    r = gcd_table(geom);
    circle.reserve(geom.m);
    inv.reserve(geom.m);
    slot_offset.reserve(geom.m);
    for (std::uint32_t a = 0; a < geom.m; ++a) {
        circle.push_back(n / r[a]);
        inv.push_back(std::uint32_t(*mod_inverse(position[a] / r[a], circle[a])));
        slot_offset.push_back(std::uint32_t(slot_base.size()));
        for (std::uint32_t i = 0; i < circle[a]; ++i) {
            const std::uint32_t base = std::uint32_t(std::uint64_t(inv[a]) * i % circle[a]);
            slot_base.push_back((base + half) % n);
        }
    }
}

namespace {

// Shared vote stage of the geometric family. Each antenna quantizes its phase on
// the N/r circle and votes for every grid index consistent with the
// quantization points within +-k steps. counts must be zeroed, sized N,
// indexed by grid slot n-1. Returns the total number of votes cast.
std::uint64_t build_votes(std::span<const cplx> y, const GeometryTables& t, std::uint32_t k,
                          std::span<const std::uint32_t> subset,
                          std::vector<std::uint32_t>& counts) {
    const std::uint32_t n = t.n;
    std::uint64_t total = 0;
    for (const std::uint32_t a : subset) {
        const cplx value = y[a];
        if (value == cplx{0.0, 0.0}) continue;  // undefined phase: abstain
        const std::uint32_t circle = t.circle[a];
        const std::uint32_t r = t.r[a];
        const std::uint32_t* base = t.slot_base.data() + t.slot_offset[a];
        const std::uint32_t tq = quantize_phase(value, circle);
        // Window start (t - k) mod circle, then walk 2k+1 points with a
        // wraparound increment; a window longer than the circle revisits
        // points, which is the intended multiplicity.
        std::uint32_t i = std::uint32_t((std::int64_t(tq) - k) % circle + circle) % circle;
        for (std::uint32_t step = 0; step < 2 * k + 1; ++step) {
            std::uint32_t slot = base[i];
            for (std::uint32_t j = 0; j < r; ++j) {
                ++counts[slot];
                slot += circle;
                if (slot >= n) slot -= n;
            }
            total += r;
            if (++i == circle) i = 0;
        }
    }
    return total;
}

// Most-voted slot; ties toward the smaller index. Also reports how many
// distinct slots received votes.
std::uint32_t vote_mode(const std::vector<std::uint32_t>& counts, std::uint32_t* distinct) {
    std::uint32_t best = 0;
    std::uint32_t voted = 0;
    for (std::uint32_t slot = 0; slot < counts.size(); ++slot) {
        if (counts[slot] > 0) ++voted;
        if (counts[slot] > counts[best]) best = slot;
    }
    if (distinct) *distinct = voted;
    return best;
}

std::vector<std::uint32_t> all_antennas(std::uint32_t m) {
    std::vector<std::uint32_t> subset(m);
    std::iota(subset.begin(), subset.end(), 0);
    return subset;
}

std::vector<std::uint32_t> resolve_subset(const ArrayGeometry& geom,
                                          std::vector<std::uint32_t> subset) {
    if (subset.empty()) return all_antennas(geom.m);
    for (const auto a : subset) {
        if (a >= geom.m) throw std::invalid_argument("antenna subset index out of range");
    }
    return subset;
}

}  // namespace

GeometricDecoder::GeometricDecoder(const ArrayGeometry& geom,
                                   std::vector<std::uint32_t> antenna_subset)
    : tables_(geom), subset_(resolve_subset(geom, std::move(antenna_subset))) {}

DecodeOutcome GeometricDecoder::decode(std::span<const cplx> y, DecodeTrace* trace) const {
    check_length(y.size(), tables_.position.size());
    auto& counts = zeroed_counts(tables_.n);
    const std::uint64_t total = build_votes(y, tables_, 0, subset_, counts);
    if (total == 0) throw std::runtime_error("every antenna abstained; no votes cast");

    DecodeOutcome out;
    out.estimated_index = vote_mode(counts, &out.distinct_voted) + 1;
    out.total_votes = total;
    if (trace) trace->vote_counts = counts;
    return out;
}

ModifiedGeometricDecoder::ModifiedGeometricDecoder(const ArrayGeometry& geom, std::uint32_t k,
                                                   std::vector<std::uint32_t> antenna_subset)
    : tables_(geom), k_(k), subset_(resolve_subset(geom, std::move(antenna_subset))) {}

DecodeOutcome ModifiedGeometricDecoder::decode(std::span<const cplx> y,
                                               DecodeTrace* trace) const {
    check_length(y.size(), tables_.position.size());
    auto& counts = zeroed_counts(tables_.n);
    const std::uint64_t total = build_votes(y, tables_, k_, subset_, counts);
    if (total == 0) throw std::runtime_error("every antenna abstained; no votes cast");

    DecodeOutcome out;
    out.estimated_index = vote_mode(counts, &out.distinct_voted) + 1;
    out.total_votes = total;
    if (trace) trace->vote_counts = counts;
    return out;
}

GeoReducedMapDecoder::GeoReducedMapDecoder(const ArrayGeometry& geom, const Codebook& book,
                                           std::uint32_t k, std::uint32_t g,
                                           std::vector<std::uint32_t> antenna_subset)
    : tables_(geom),
      book_(&book),
      k_(k),
      g_(g),
      subset_(resolve_subset(geom, std::move(antenna_subset))) {
    if (g < 1 || g > book.size()) {
        throw std::invalid_argument("shortlist size must be in [1, N]");
    }
}

DecodeOutcome GeoReducedMapDecoder::decode(std::span<const cplx> y, DecodeTrace* trace) const {
    check_length(y.size(), tables_.position.size());
    const std::uint32_t n = tables_.n;
    auto& s = scratch();
    auto& counts = zeroed_counts(n);
    const std::uint64_t total = build_votes(y, tables_, k_, subset_, counts);
    if (total == 0) throw std::runtime_error("every antenna abstained; no votes cast");

    // Top-g slots by vote count, ties toward the smaller index. Zero-vote
    // slots qualify too, so the shortlist pads with the smallest unvoted
    // indices whenever fewer than g slots received votes. Counting
    // selection: find the threshold count, take everything above it, fill
    // the rest with the lowest-index slots at the threshold.
    std::uint32_t max_count = 0;
    for (const auto c : counts) max_count = std::max(max_count, c);
    auto& hist = s.hist;
    hist.assign(std::size_t(max_count) + 1, 0);
    for (const auto c : counts) ++hist[c];
    std::uint32_t threshold = max_count;
    std::uint64_t above_or_at = 0;
    for (std::uint32_t c = max_count;; --c) {
        above_or_at += hist[c];
        if (above_or_at >= g_ || c == 0) {
            threshold = c;
            break;
        }
    }
    std::uint32_t needed_at_threshold =
        g_ - std::uint32_t(above_or_at - hist[threshold]);
    auto& slots = s.slots;
    slots.clear();
    for (std::uint32_t slot = 0; slot < n && slots.size() < g_; ++slot) {
        if (counts[slot] > threshold) {
            slots.push_back(slot);
        } else if (counts[slot] == threshold && needed_at_threshold > 0) {
            slots.push_back(slot);
            --needed_at_threshold;
        }
    }

    auto& scores = s.scores;
    scores.resize(g_);
    kernels::corr_abs2_subset(y.data(), book_->planar(), slots.data(), g_, scores.data());

    std::uint32_t best = 0;
    for (std::uint32_t i = 1; i < g_; ++i) {
        if (scores[i] > scores[best] ||
            (scores[i] == scores[best] && slots[i] < slots[best])) {
            best = i;
        }
    }

    DecodeOutcome out;
    out.estimated_index = slots[best] + 1;
    out.candidates_examined = g_;
    out.total_votes = total;
    std::uint32_t distinct = 0;
    vote_mode(counts, &distinct);
    out.distinct_voted = distinct;
    if (trace) {
        trace->vote_counts = counts;
        trace->shortlist.assign(slots.begin(), slots.end());
        for (auto& slot : trace->shortlist) slot += 1;
        trace->scores = scores;
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-shot helpers

DecodeOutcome decode_map(std::span<const cplx> y, const Codebook& book) {
    return MapDecoder(book).decode(y);
}

DecodeOutcome decode_window(std::span<const cplx> y, const Codebook& book, std::uint32_t z) {
    return WindowDecoder(book, z).decode(y);
}

DecodeOutcome decode_geometric(std::span<const cplx> y, const ArrayGeometry& geom) {
    return GeometricDecoder(geom).decode(y);
}

DecodeOutcome decode_modified_geometric(std::span<const cplx> y, const ArrayGeometry& geom,
                                        std::uint32_t k) {
    return ModifiedGeometricDecoder(geom, k).decode(y);
}

DecodeOutcome decode_geo_reduced_map(std::span<const cplx> y, const ArrayGeometry& geom,
                                     const Codebook& book, std::uint32_t k, std::uint32_t g) {
    return GeoReducedMapDecoder(geom, book, k, g).decode(y);
}

}  // namespace ssc
