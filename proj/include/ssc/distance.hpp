#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ssc/codebook.hpp"

namespace ssc {

struct DistanceReport {
    double d_min = 0.0;
    GridIndex first = 0;   // argmin pair, first < second, 1-based
    GridIndex second = 0;
    double lower_bound = 0.0;  // 1 - 2/M
    double upper_bound = 0.0;  // 1 - 1/M
    std::uint64_t evaluations = 0;  // distance evaluations performed
};

/// Subspace distance between two unit-norm codewords: 1 - |c1^H c2|^2,
/// clamped to [0, 1]. Throws std::invalid_argument on length mismatch.
double pair_distance(std::span<const cplx> c1, std::span<const cplx> c2);

/// Minimum pairwise distance via the group structure: the distance of a
/// pair depends only on the index offset, so N-1 offset evaluations of
/// |sum_m beta^{d_m}|^2 cover all N(N-1)/2 pairs. The reported d_min is
/// re-evaluated from the argmin pair's stored codewords. O(N*M).
DistanceReport min_distance(const Codebook& book);

/// Raw offset-scan minimum (no re-evaluation); optionally reports the
/// minimizing offset. Cross-checked against min_distance_pairwise.
double min_distance_offset_scan(const Codebook& book, std::uint32_t* offset = nullptr);

/// Exhaustive O(N^2*M) pairwise scan; the reference oracle for the offset
/// scan. Ties resolve to the lexicographically smallest index pair.
double min_distance_pairwise(const Codebook& book, GridIndex* first = nullptr,
                             GridIndex* second = nullptr);

/// Column-major complex matrix; columns are expected orthonormal where the
/// subspace distance demands it.
struct BasisMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> a;  // rows*cols, column-major

    BasisMatrix() = default;
    BasisMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    cplx& at(std::size_t r, std::size_t c) { return a[c * rows + r]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a[c * rows + r]; }
};

/// Distance between the t-dimensional subspaces spanned by U and V:
/// sum of sin^2 of the principal angles, computed as t - |U^H V|_F^2.
/// Columns must be orthonormal to 1e-10; throws std::invalid_argument
/// otherwise or on dimension mismatch.
double general_subspace_distance(const BasisMatrix& u, const BasisMatrix& v);

}  // namespace ssc
