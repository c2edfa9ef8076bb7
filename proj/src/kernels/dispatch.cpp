#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ssc/kernels.hpp"

namespace ssc::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_default() {
    if (const char* env = std::getenv("SSC_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2))
            return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && backend_supported(Backend::neon))
            return Backend::neon;
        // Unknown or unsupported request: fall through to auto-detect.
    }
#if defined(__aarch64__)
    return Backend::neon;
#else
    return cpu_has_avx2_fma() ? Backend::avx2 : Backend::scalar;
#endif
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{detect_default()};
    return slot;
}

}  // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
            return cpu_has_avx2_fma();
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

bool set_backend(Backend b) {
    if (!backend_supported(b)) return false;
    backend_slot().store(b, std::memory_order_relaxed);
    return true;
}

void corr_abs2(const std::complex<double>* y, const PlanarMatrix& a, double* out) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            corr_abs2_avx2(y, a, out);
            return;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            corr_abs2_neon(y, a, out);
            return;
#endif
        default:
            corr_abs2_scalar(y, a, out);
            return;
    }
}

void corr_abs2_subset(const std::complex<double>* y, const PlanarMatrix& a,
                      const std::uint32_t* idx, std::size_t count, double* out) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            corr_abs2_subset_avx2(y, a, idx, count, out);
            return;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            corr_abs2_subset_neon(y, a, idx, count, out);
            return;
#endif
        default:
            corr_abs2_subset_scalar(y, a, idx, count, out);
            return;
    }
}

}  // namespace ssc::kernels
