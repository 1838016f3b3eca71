#include <arm_neon.h>

#include <algorithm>

#include "analogc/kernels.hpp"

namespace analogc::kernels {

namespace {

// One complex number per register: [re, im].
inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
    float64x2_t ar = vdupq_laneq_f64(a, 0);
    float64x2_t ai = vdupq_laneq_f64(a, 1);
    float64x2_t bs = vextq_f64(b, b, 1);                 // [bi, br]
    const float64x2_t sign = {-1.0, 1.0};
    return vfmaq_f64(vmulq_f64(ar, b), vmulq_f64(ai, bs), sign);
}

inline float64x2_t load(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void store(cplx* p, float64x2_t v) { vst1q_f64(reinterpret_cast<double*>(p), v); }

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    std::fill(c, c + n * n, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i * n + k] == cplx{}) continue;
            float64x2_t av = load(a + i * n + k);
            for (std::size_t j = 0; j < n; ++j) store(c + i * n + j, vaddq_f64(load(c + i * n + j), cmul(av, load(b + k * n + j))));
        }
    }
}

void matmul_adjoint(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    const float64x2_t conj = {1.0, -1.0};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            float64x2_t acc = vdupq_n_f64(0.0);
            for (std::size_t k = 0; k < n; ++k) acc = vaddq_f64(acc, cmul(load(a + i * n + k), vmulq_f64(load(b + j * n + k), conj)));
            store(c + i * n + j, acc);
        }
    }
}

void scale_columns(const cplx* a, const cplx* d, cplx* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) store(c + i * n + j, cmul(load(a + i * n + j), load(d + j)));
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
    float64x2_t av = load(&alpha);
    for (std::size_t i = 0; i < len; ++i) store(y + i, vaddq_f64(load(y + i), cmul(av, load(x + i))));
}

const KernelTable kTable{"neon", matmul, matmul_adjoint, scale_columns, axpy};

}  // namespace

const KernelTable* neon_table() { return &kTable; }

}  // namespace analogc::kernels
