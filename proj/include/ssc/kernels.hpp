#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ssc::kernels {

/// Antenna-major planar complex matrix: row m holds the m-th component of
/// every column, so a kernel scanning columns walks contiguous memory.
struct PlanarMatrix {
    std::size_t rows = 0;  // antennas
    std::size_t cols = 0;  // codewords
    std::vector<double> re;
    std::vector<double> im;

    PlanarMatrix() = default;
    PlanarMatrix(std::size_t r, std::size_t c)
        : rows(r), cols(c), re(r * c, 0.0), im(r * c, 0.0) {}

    std::complex<double> at(std::size_t m, std::size_t n) const {
        return {re[m * cols + n], im[m * cols + n]};
    }
    void set(std::size_t m, std::size_t n, std::complex<double> v) {
        re[m * cols + n] = v.real();
        im[m * cols + n] = v.imag();
    }
};

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);

/// Backend currently used by the dispatched entry points. Chosen once at
/// startup: best supported backend, unless the SSC_KERNEL environment
/// variable ("scalar", "avx2", "neon") requests another.
Backend active_backend();

/// Force a backend at runtime (mainly for tests). Returns false and leaves
/// the active backend unchanged if the request is unsupported on this CPU.
bool set_backend(Backend b);

/// out[n] = |sum_m conj(y[m]) * a(m, n)|^2 for every column n.
void corr_abs2(const std::complex<double>* y, const PlanarMatrix& a, double* out);

/// Same, restricted to the columns idx[0..count); out[i] matches idx[i].
void corr_abs2_subset(const std::complex<double>* y, const PlanarMatrix& a,
                      const std::uint32_t* idx, std::size_t count, double* out);

// Per-backend entry points. The scalar versions are the reference the other
// backends are equivalence-tested against.
void corr_abs2_scalar(const std::complex<double>* y, const PlanarMatrix& a, double* out);
void corr_abs2_subset_scalar(const std::complex<double>* y, const PlanarMatrix& a,
                             const std::uint32_t* idx, std::size_t count, double* out);

#if defined(__x86_64__) || defined(_M_X64)
void corr_abs2_avx2(const std::complex<double>* y, const PlanarMatrix& a, double* out);
void corr_abs2_subset_avx2(const std::complex<double>* y, const PlanarMatrix& a,
                           const std::uint32_t* idx, std::size_t count, double* out);
#endif

#if defined(__aarch64__)
void corr_abs2_neon(const std::complex<double>* y, const PlanarMatrix& a, double* out);
void corr_abs2_subset_neon(const std::complex<double>* y, const PlanarMatrix& a,
                           const std::uint32_t* idx, std::size_t count, double* out);
#endif

/// Index of the maximum element; ties resolve to the lowest index.
std::size_t argmax_lowest(const double* v, std::size_t n);

}  // namespace ssc::kernels
