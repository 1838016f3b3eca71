#pragma once

#include <complex>
#include <cstddef>

namespace analogc::kernels {

using cplx = std::complex<double>;

// Dense complex kernels on row-major n x n matrices. Outputs never alias inputs.
struct KernelTable {
    const char* name;
    void (*matmul)(const cplx* a, const cplx* b, cplx* c, std::size_t n);            // c = a b
    void (*matmul_adjoint)(const cplx* a, const cplx* b, cplx* c, std::size_t n);    // c = a b^dagger
    void (*scale_columns)(const cplx* a, const cplx* d, cplx* c, std::size_t n);     // c = a diag(d)
    void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t len);               // y += alpha x
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks the instructions.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Chosen once: ANALOGC_KERNELS=scalar|avx2|neon forces a table, otherwise the best supported one.
const KernelTable& active();

}  // namespace analogc::kernels
