#include "ssc/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssc {

namespace {

double clamp_unit(double d) { return std::clamp(d, 0.0, 1.0); }

}  // namespace

double pair_distance(std::span<const cplx> c1, std::span<const cplx> c2) {
    if (c1.size() != c2.size()) {
        throw std::invalid_argument("pair_distance: codeword lengths differ");
    }
    cplx inner{0.0, 0.0};
    for (std::size_t i = 0; i < c1.size(); ++i) {
        inner += std::conj(c1[i]) * c2[i];
    }
    return clamp_unit(1.0 - std::norm(inner));
}

double min_distance_offset_scan(const Codebook& book, std::uint32_t* offset) {
    const std::uint32_t n = book.size();
    const std::uint32_t m = book.antennas();
    if (n < 2) throw std::invalid_argument("min distance needs at least two codewords");

    // Precompute the N-th roots once; an offset k evaluates
    // 1 - |sum_m w^{k*d_m}|^2 / M^2.
    std::vector<cplx> roots(n);
    for (std::uint32_t k = 0; k < n; ++k) roots[k] = unit_root(2ULL * k, 2 * n);

    const double inv_m2 = 1.0 / (double(m) * double(m));
    double best = 2.0;
    std::uint32_t best_k = 0;
    for (std::uint32_t k = 1; k < n; ++k) {
        cplx sum{0.0, 0.0};
        for (const auto d : book.geometry().positions) {
            sum += roots[std::uint64_t(k) * d % n];
        }
        const double dist = clamp_unit(1.0 - std::norm(sum) * inv_m2);
        if (dist < best) {
            best = dist;
            best_k = k;
        }
    }
    if (offset) *offset = best_k;
    return best;
}

double min_distance_pairwise(const Codebook& book, GridIndex* first, GridIndex* second) {
    const std::uint32_t n = book.size();
    if (n < 2) throw std::invalid_argument("min distance needs at least two codewords");
    const auto& planar = book.planar();
    const std::uint32_t m = book.antennas();

    double best = 2.0;
    GridIndex best_i = 1, best_j = 2;
    for (GridIndex i = 1; i <= n; ++i) {
        for (GridIndex j = i + 1; j <= n; ++j) {
            cplx inner{0.0, 0.0};
            for (std::uint32_t a = 0; a < m; ++a) {
                inner += std::conj(planar.at(a, i - 1)) * planar.at(a, j - 1);
            }
            const double dist = clamp_unit(1.0 - std::norm(inner));
            if (dist < best) {
                best = dist;
                best_i = i;
                best_j = j;
            }
        }
    }
    if (first) *first = best_i;
    if (second) *second = best_j;
    return best;
}

DistanceReport min_distance(const Codebook& book) {
    const std::uint32_t n = book.size();
    const double m = double(book.antennas());

    std::uint32_t k = 0;
    min_distance_offset_scan(book, &k);
    // Offsets k and N-k give the same distance; the lexicographically
    // smallest pair realizing the minimum is (1, 1 + min(k, N-k)).
    const std::uint32_t k_small = std::min(k, n - k);

    DistanceReport report;
    report.first = 1;
    report.second = 1 + k_small;
    const auto w1 = book.word(report.first);
    const auto w2 = book.word(report.second);
    report.d_min = pair_distance(w1, w2);
    report.lower_bound = 1.0 - 2.0 / m;
    report.upper_bound = 1.0 - 1.0 / m;
    report.evaluations = n - 1;
    return report;
}

double general_subspace_distance(const BasisMatrix& u, const BasisMatrix& v) {
    if (u.rows != v.rows || u.cols != v.cols) {
        throw std::invalid_argument("general_subspace_distance: dimension mismatch");
    }
    if (u.cols == 0 || u.rows < u.cols) {
        throw std::invalid_argument("general_subspace_distance: invalid basis shape");
    }

    constexpr double kOrthoTol = 1e-10;
    for (const BasisMatrix* basis : {&u, &v}) {
        for (std::size_t c1 = 0; c1 < basis->cols; ++c1) {
            for (std::size_t c2 = c1; c2 < basis->cols; ++c2) {
                cplx inner{0.0, 0.0};
                for (std::size_t r = 0; r < basis->rows; ++r) {
                    inner += std::conj(basis->at(r, c1)) * basis->at(r, c2);
                }
                const double want = (c1 == c2) ? 1.0 : 0.0;
                if (std::abs(inner - cplx{want, 0.0}) > kOrthoTol) {
                    throw std::invalid_argument(
                        "general_subspace_distance: basis columns not orthonormal");
                }
            }
        }
    }

    // sum sin^2(beta_i) = t - sum sigma_i^2 and the sigma_i are the singular
    // values of the cross-Gram G = U^H V, so the sum is just |G|_F^2.
    double gram_sq = 0.0;
    for (std::size_t cu = 0; cu < u.cols; ++cu) {
        for (std::size_t cv = 0; cv < v.cols; ++cv) {
            cplx inner{0.0, 0.0};
            for (std::size_t r = 0; r < u.rows; ++r) {
                inner += std::conj(u.at(r, cu)) * v.at(r, cv);
            }
            gram_sq += std::norm(inner);
        }
    }
    return std::clamp(double(u.cols) - gram_sq, 0.0, double(u.cols));
}

}  // namespace ssc
