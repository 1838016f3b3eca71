#include <immintrin.h>

#include <algorithm>

#include "analogc/kernels.hpp"

namespace analogc::kernels {

namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);
    __m256d ai = _mm256_permute_pd(a, 0xF);
    __m256d bs = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

// Broadcast scalar (ar + i ai) times b, added to c.
inline __m256d cfma_bcast(__m256d ar, __m256d ai, __m256d b, __m256d c) {
    __m256d bs = _mm256_permute_pd(b, 0x5);
    return _mm256_add_pd(c, _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs)));
}

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    std::fill(c, c + n * n, cplx{});
    const std::size_t vec = n & ~std::size_t{1};
    for (std::size_t i = 0; i < n; ++i) {
        auto* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t k = 0; k < n; ++k) {
            cplx aik = a[i * n + k];
            if (aik == cplx{}) continue;
            __m256d ar = _mm256_set1_pd(aik.real()), ai = _mm256_set1_pd(aik.imag());
            const auto* brow = reinterpret_cast<const double*>(b + k * n);
            for (std::size_t j = 0; j < vec; j += 2) {
                __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                _mm256_storeu_pd(crow + 2 * j, cfma_bcast(ar, ai, _mm256_loadu_pd(brow + 2 * j), cv));
            }
            for (std::size_t j = vec; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
        }
    }
}

void matmul_adjoint(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    const std::size_t vec = n & ~std::size_t{1};
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto* arow = reinterpret_cast<const double*>(a + i * n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto* brow = reinterpret_cast<const double*>(b + j * n);
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t k = 0; k < vec; k += 2) {
                __m256d bv = _mm256_xor_pd(_mm256_loadu_pd(brow + 2 * k), conj_mask);
                acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(arow + 2 * k), bv));
            }
            __m128d lo = _mm256_castpd256_pd128(acc), hi = _mm256_extractf128_pd(acc, 1);
            __m128d sum = _mm_add_pd(lo, hi);
            cplx v{_mm_cvtsd_f64(sum), _mm_cvtsd_f64(_mm_unpackhi_pd(sum, sum))};
            for (std::size_t k = vec; k < n; ++k) v += a[i * n + k] * std::conj(b[j * n + k]);
            c[i * n + j] = v;
        }
    }
}

void scale_columns(const cplx* a, const cplx* d, cplx* c, std::size_t n) {
    const std::size_t vec = n & ~std::size_t{1};
    const auto* dd = reinterpret_cast<const double*>(d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto* arow = reinterpret_cast<const double*>(a + i * n);
        auto* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t j = 0; j < vec; j += 2) _mm256_storeu_pd(crow + 2 * j, cmul(_mm256_loadu_pd(arow + 2 * j), _mm256_loadu_pd(dd + 2 * j)));
        for (std::size_t j = vec; j < n; ++j) c[i * n + j] = a[i * n + j] * d[j];
    }
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
    const std::size_t vec = len & ~std::size_t{1};
    __m256d ar = _mm256_set1_pd(alpha.real()), ai = _mm256_set1_pd(alpha.imag());
    const auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < vec; i += 2) {
        _mm256_storeu_pd(yd + 2 * i, cfma_bcast(ar, ai, _mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i)));
    }
    for (std::size_t i = vec; i < len; ++i) y[i] += alpha * x[i];
}

const KernelTable kTable{"avx2", matmul, matmul_adjoint, scale_columns, axpy};

}  // namespace

const KernelTable* avx2_table() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &kTable : nullptr;
}

}  // namespace analogc::kernels
