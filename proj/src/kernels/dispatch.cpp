#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "analogc/kernels.hpp"

namespace analogc::kernels {

#if !defined(ANALOGC_HAVE_AVX2_TU)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(ANALOGC_HAVE_NEON_TU)
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

const KernelTable& choose() {
    if (const char* forced = std::getenv("ANALOGC_KERNELS"); forced && *forced && std::strcmp(forced, "auto") != 0) {
        std::string name = forced;
        if (name == "scalar") return scalar_table();
        const KernelTable* t = name == "avx2" ? avx2_table() : name == "neon" ? neon_table() : nullptr;
        if (!t) throw std::runtime_error("ANALOGC_KERNELS=" + name + " is not available on this build or CPU");
        return *t;
    }
    if (const KernelTable* t = avx2_table()) return *t;
    if (const KernelTable* t = neon_table()) return *t;
    return scalar_table();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = choose();
    return table;
}

}  // namespace analogc::kernels
