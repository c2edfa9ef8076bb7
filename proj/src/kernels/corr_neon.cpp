// NEON variants of the correlation kernels (aarch64). Two columns per
// iteration; per-column op order matches the AVX2 backend (fused
// multiply-adds in the scalar reference order).

#if defined(__aarch64__)

#include <arm_neon.h>

#include "ssc/kernels.hpp"

namespace ssc::kernels {

void corr_abs2_neon(const std::complex<double>* y, const PlanarMatrix& a, double* out) {
    const std::size_t m_rows = a.rows;
    const std::size_t n_cols = a.cols;
    const double* re = a.re.data();
    const double* im = a.im.data();

    std::size_t n = 0;
    for (; n + 2 <= n_cols; n += 2) {
        float64x2_t acc_re = vdupq_n_f64(0.0);
        float64x2_t acc_im = vdupq_n_f64(0.0);
        for (std::size_t m = 0; m < m_rows; ++m) {
            const float64x2_t yr = vdupq_n_f64(y[m].real());
            const float64x2_t yi = vdupq_n_f64(y[m].imag());
            const float64x2_t ar = vld1q_f64(re + m * n_cols + n);
            const float64x2_t ai = vld1q_f64(im + m * n_cols + n);
            acc_re = vfmaq_f64(acc_re, yr, ar);
            acc_re = vfmaq_f64(acc_re, yi, ai);
            acc_im = vfmaq_f64(acc_im, yr, ai);
            acc_im = vfmsq_f64(acc_im, yi, ar);
        }
        const float64x2_t mag = vfmaq_f64(vmulq_f64(acc_im, acc_im), acc_re, acc_re);
        vst1q_f64(out + n, mag);
    }

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

void corr_abs2_subset_neon(const std::complex<double>* y, const PlanarMatrix& a,
                           const std::uint32_t* idx, std::size_t count, double* out) {
    const std::size_t m_rows = a.rows;
    const std::size_t n_cols = a.cols;
    const double* re = a.re.data();
    const double* im = a.im.data();

    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        const std::size_t n0 = idx[i];
        const std::size_t n1 = idx[i + 1];
        float64x2_t acc_re = vdupq_n_f64(0.0);
        float64x2_t acc_im = vdupq_n_f64(0.0);
        for (std::size_t m = 0; m < m_rows; ++m) {
            const float64x2_t yr = vdupq_n_f64(y[m].real());
            const float64x2_t yi = vdupq_n_f64(y[m].imag());
            const double* row_re = re + m * n_cols;
            const double* row_im = im + m * n_cols;
            float64x2_t ar = vdupq_n_f64(row_re[n0]);
            ar = vsetq_lane_f64(row_re[n1], ar, 1);
            float64x2_t ai = vdupq_n_f64(row_im[n0]);
            ai = vsetq_lane_f64(row_im[n1], ai, 1);
            acc_re = vfmaq_f64(acc_re, yr, ar);
            acc_re = vfmaq_f64(acc_re, yi, ai);
            acc_im = vfmaq_f64(acc_im, yr, ai);
            acc_im = vfmsq_f64(acc_im, yi, ar);
        }
        const float64x2_t mag = vfmaq_f64(vmulq_f64(acc_im, acc_im), acc_re, acc_re);
        vst1q_f64(out + i, mag);
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

#endif  // aarch64
