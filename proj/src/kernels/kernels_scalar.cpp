#include <algorithm>

#include "analogc/kernels.hpp"

namespace analogc::kernels {

namespace {

// Plain real arithmetic; std::complex operator* goes through the NaN-recovery path.
inline void fma_into(double& re, double& im, double ar, double ai, double br, double bi) {
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
}

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    std::fill(c, c + n * n, cplx{});
    auto* cd = reinterpret_cast<double*>(c);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            double ar = a[i * n + k].real(), ai = a[i * n + k].imag();
            if (ar == 0.0 && ai == 0.0) continue;
            const cplx* brow = b + k * n;
            double* crow = cd + 2 * i * n;
            for (std::size_t j = 0; j < n; ++j) fma_into(crow[2 * j], crow[2 * j + 1], ar, ai, brow[j].real(), brow[j].imag());
        }
    }
}

void matmul_adjoint(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                fma_into(re, im, a[i * n + k].real(), a[i * n + k].imag(), b[j * n + k].real(), -b[j * n + k].imag());
            }
            c[i * n + j] = {re, im};
        }
    }
}

void scale_columns(const cplx* a, const cplx* d, cplx* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            fma_into(re, im, a[i * n + j].real(), a[i * n + j].imag(), d[j].real(), d[j].imag());
            c[i * n + j] = {re, im};
        }
    }
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
    auto* yd = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < len; ++i) fma_into(yd[2 * i], yd[2 * i + 1], alpha.real(), alpha.imag(), x[i].real(), x[i].imag());
}

const KernelTable kTable{"scalar", matmul, matmul_adjoint, scale_columns, axpy};

}  // namespace

const KernelTable& scalar_table() { return kTable; }

}  // namespace analogc::kernels
