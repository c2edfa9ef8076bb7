#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ssc/geometry.hpp"
#include "ssc/kernels.hpp"

namespace ssc {

using cplx = std::complex<double>;

/// Grid positions are 1-based everywhere a caller sees them: n in [1, N]
/// selects the DoA with sin(theta_n) = -1 + 2(n-1)/N.
using GridIndex = std::uint32_t;

/// sin(theta_n) = -1 + 2(n-1)/N.
double grid_sin(GridIndex n, std::uint32_t n_points);

/// theta_n = arcsin(-1 + 2(n-1)/N) for n = 1..N, monotone in sin.
std::vector<double> grid_angles(std::uint32_t n_points);

/// alpha_n = exp(j*pi*sin(theta_n)), the phase-per-position unit of grid
/// point n. An N-th root of unity whenever N is even (always the case for
/// odd prime M, since N = M^2 - 1).
cplx alpha_of_index(GridIndex n, std::uint32_t n_points);

/// Integer phase bookkeeping: alpha_n = exp(j*2*pi*u/(2N)) with
/// u = (2(n-1) - N) mod 2N. Powers of alpha_n reduce exponents mod 2N, so
/// codeword entries never accumulate floating-point phase drift. For even N
/// the exponents are all even and the arithmetic collapses to the usual
/// mod-N grid.
std::uint32_t phase_exponent(GridIndex n, std::uint32_t n_points);

/// exp(j*2*pi*k/two_n). The single place phases become doubles; codebook
/// and channel share it so their values agree exactly.
cplx unit_root(std::uint64_t k, std::uint32_t two_n);

/// Sensing subspace codebook: one unit-norm codeword per grid point,
/// word n = (1/sqrt(M)) * [alpha_n^{d_1}, ..., alpha_n^{d_M}].
/// Immutable after construction; storage is antenna-major planar so the
/// correlation kernels stream it directly.
class Codebook {
public:
    static Codebook build(const ArrayGeometry& geom);

    const ArrayGeometry& geometry() const { return geom_; }
    std::uint32_t size() const { return n_; }            // N codewords
    std::uint32_t antennas() const { return geom_.m; }   // M
    const kernels::PlanarMatrix& planar() const { return words_; }

    cplx entry(GridIndex n, std::uint32_t antenna) const;  // antenna 0-based
    std::vector<cplx> word(GridIndex n) const;

    /// Debug CSV: n, sin_theta, then re/im per antenna. Not a stable format.
    void export_csv(std::ostream& out) const;

private:
    ArrayGeometry geom_;
    std::uint32_t n_ = 0;
    kernels::PlanarMatrix words_;
};

}  // namespace ssc
