// AVX2/FMA variants of the correlation kernels. Built with -mavx2 -mfma on
// x86-64 only; dispatch guards execution behind a CPUID check.
//
// Per-column math follows the scalar reference: conj(y[m]) * a(m, n)
// accumulated over m ascending. Lanes run across columns, so one FMA step
// advances four columns at once. The full and subset variants use the same
// per-column instruction sequence so that identical columns produce
// identical doubles regardless of which entry point scored them.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "ssc/kernels.hpp"

namespace ssc::kernels {

void corr_abs2_avx2(const std::complex<double>* y, const PlanarMatrix& a, double* out) {
    const std::size_t m_rows = a.rows;
    const std::size_t n_cols = a.cols;
    const double* re = a.re.data();
    const double* im = a.im.data();

    std::size_t n = 0;
    for (; n + 4 <= n_cols; n += 4) {
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        for (std::size_t m = 0; m < m_rows; ++m) {
            const __m256d yr = _mm256_set1_pd(y[m].real());
            const __m256d yi = _mm256_set1_pd(y[m].imag());
            const __m256d ar = _mm256_loadu_pd(re + m * n_cols + n);
            const __m256d ai = _mm256_loadu_pd(im + m * n_cols + n);
            acc_re = _mm256_fmadd_pd(yr, ar, acc_re);
            acc_re = _mm256_fmadd_pd(yi, ai, acc_re);
            acc_im = _mm256_fmadd_pd(yr, ai, acc_im);
            acc_im = _mm256_fnmadd_pd(yi, ar, acc_im);
        }
        const __m256d mag = _mm256_fmadd_pd(acc_re, acc_re, _mm256_mul_pd(acc_im, acc_im));
        _mm256_storeu_pd(out + n, mag);
    }

    // Remainder columns, one at a time with scalar FMA (same op sequence).
    for (; n < n_cols; ++n) {
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (std::size_t m = 0; m < m_rows; ++m) {
            const double yr = y[m].real();
            const double yi = y[m].imag();
            const double ar = re[m * n_cols + n];
            const double ai = im[m * n_cols + n];
            acc_re = __builtin_fma(yr, ar, acc_re);
            acc_re = __builtin_fma(yi, ai, acc_re);
            acc_im = __builtin_fma(yr, ai, acc_im);
            acc_im = __builtin_fma(-yi, ar, acc_im);
        }
        out[n] = __builtin_fma(acc_re, acc_re, acc_im * acc_im);
    }
}

void corr_abs2_subset_avx2(const std::complex<double>* y, const PlanarMatrix& a,
                           const std::uint32_t* idx, std::size_t count, double* out) {
    const std::size_t m_rows = a.rows;
    const std::size_t n_cols = a.cols;
    const double* re = a.re.data();
    const double* im = a.im.data();

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m128i cols = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        for (std::size_t m = 0; m < m_rows; ++m) {
            const __m256d yr = _mm256_set1_pd(y[m].real());
            const __m256d yi = _mm256_set1_pd(y[m].imag());
            const double* row_re = re + m * n_cols;
            const double* row_im = im + m * n_cols;
            const __m256d ar = _mm256_i32gather_pd(row_re, cols, 8);
            const __m256d ai = _mm256_i32gather_pd(row_im, cols, 8);
            acc_re = _mm256_fmadd_pd(yr, ar, acc_re);
            acc_re = _mm256_fmadd_pd(yi, ai, acc_re);
            acc_im = _mm256_fmadd_pd(yr, ai, acc_im);
            acc_im = _mm256_fnmadd_pd(yi, ar, acc_im);
        }
        const __m256d mag = _mm256_fmadd_pd(acc_re, acc_re, _mm256_mul_pd(acc_im, acc_im));
        _mm256_storeu_pd(out + i, mag);
    }

    for (; i < count; ++i) {
        const std::size_t n = idx[i];
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (std::size_t m = 0; m < m_rows; ++m) {
            const double yr = y[m].real();
            const double yi = y[m].imag();
            const double ar = re[m * n_cols + n];
            const double ai = im[m * n_cols + n];
            acc_re = __builtin_fma(yr, ar, acc_re);
            acc_re = __builtin_fma(yi, ai, acc_re);
            acc_im = __builtin_fma(yr, ai, acc_im);
            acc_im = __builtin_fma(-yi, ar, acc_im);
        }
        out[i] = __builtin_fma(acc_re, acc_re, acc_im * acc_im);
    }
}

}  // namespace ssc::kernels

#endif  // x86-64
