#include "ssc/kernels.hpp"

// Reference kernels. Per-column accumulation order (m ascending, accR then
// accI, two separate adds per load) is the contract every SIMD backend must
// reproduce bit-for-bit apart from its own rounding; equivalence tests pin
// the backends to these within 1e-12.

namespace ssc::kernels {

void corr_abs2_scalar(const std::complex<double>* y, const PlanarMatrix& a, double* out) {
    const std::size_t m_rows = a.rows;
    const std::size_t n_cols = a.cols;
    for (std::size_t n = 0; n < n_cols; ++n) {
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (std::size_t m = 0; m < m_rows; ++m) {
            const double yr = y[m].real();
            const double yi = y[m].imag();
            const double ar = a.re[m * n_cols + n];
            const double ai = a.im[m * n_cols + n];
            // conj(y) * a
            acc_re += yr * ar;
            acc_re += yi * ai;
            acc_im += yr * ai;
            acc_im -= yi * ar;
        }
        out[n] = acc_re * acc_re + acc_im * acc_im;
    }
}

void corr_abs2_subset_scalar(const std::complex<double>* y, const PlanarMatrix& a,
                             const std::uint32_t* idx, std::size_t count, double* out) {
    const std::size_t m_rows = a.rows;
    const std::size_t n_cols = a.cols;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = idx[i];
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (std::size_t m = 0; m < m_rows; ++m) {
            const double yr = y[m].real();
            const double yi = y[m].imag();
            const double ar = a.re[m * n_cols + n];
            const double ai = a.im[m * n_cols + n];
            acc_re += yr * ar;
            acc_re += yi * ai;
            acc_im += yr * ai;
            acc_im -= yi * ar;
        }
        out[i] = acc_re * acc_re + acc_im * acc_im;
    }
}

std::size_t argmax_lowest(const double* v, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

}  // namespace ssc::kernels
