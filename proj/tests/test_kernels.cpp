#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

#include "analogc/kernels.hpp"

using namespace analogc::kernels;

namespace {

std::vector<cplx> random_matrix(std::mt19937_64& rng, std::size_t len) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> m(len);
    for (auto& v : m) v = {g(rng), g(rng)};
    return m;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

std::vector<const KernelTable*> variants() {
    std::vector<const KernelTable*> out;
    if (auto* t = avx2_table()) out.push_back(t);
    if (auto* t = neon_table()) out.push_back(t);
    return out;
}

// Sizes cover the vector width remainders and the power-of-two dims the verifier uses.
const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 16, 31, 64};

}  // namespace

TEST_CASE("scalar kernels against naive loops") {
    std::mt19937_64 rng(1);
    const auto& s = scalar_table();
    for (std::size_t n : kSizes) {
        auto a = random_matrix(rng, n * n), b = random_matrix(rng, n * n), d = random_matrix(rng, n);
        std::vector<cplx> c(n * n), ref(n * n);
        s.matmul(a.data(), b.data(), c.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc{};
                for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
                ref[i * n + j] = acc;
            }
        CHECK(max_diff(c, ref) < 1e-12 * static_cast<double>(n));

        s.matmul_adjoint(a.data(), b.data(), c.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc{};
                for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * std::conj(b[j * n + k]);
                ref[i * n + j] = acc;
            }
        CHECK(max_diff(c, ref) < 1e-12 * static_cast<double>(n));

        s.scale_columns(a.data(), d.data(), c.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) ref[i * n + j] = a[i * n + j] * d[j];
        CHECK(max_diff(c, ref) == 0.0);

        auto y = b, yref = b;
        cplx alpha{0.3, -1.2};
        s.axpy(alpha, a.data(), y.data(), n * n);
        for (std::size_t i = 0; i < n * n; ++i) yref[i] += alpha * a[i];
        CHECK(max_diff(y, yref) < 1e-14);
    }
}

TEST_CASE("SIMD variants agree with the scalar reference") {
    auto vs = variants();
    if (vs.empty()) MESSAGE("no SIMD variant on this build or CPU");
    std::mt19937_64 rng(2);
    const auto& s = scalar_table();
    for (const auto* v : vs) {
        INFO(v->name);
        for (int trial = 0; trial < 5; ++trial)
            for (std::size_t n : kSizes) {
                auto a = random_matrix(rng, n * n), b = random_matrix(rng, n * n), d = random_matrix(rng, n);
                std::vector<cplx> c1(n * n), c2(n * n);
                const double tol = 1e-13 * static_cast<double>(n);
                s.matmul(a.data(), b.data(), c1.data(), n);
                v->matmul(a.data(), b.data(), c2.data(), n);
                CHECK(max_diff(c1, c2) < tol);
                s.matmul_adjoint(a.data(), b.data(), c1.data(), n);
                v->matmul_adjoint(a.data(), b.data(), c2.data(), n);
                CHECK(max_diff(c1, c2) < tol);
                s.scale_columns(a.data(), d.data(), c1.data(), n);
                v->scale_columns(a.data(), d.data(), c2.data(), n);
                CHECK(max_diff(c1, c2) < 1e-14);
                auto y1 = b, y2 = b;
                s.axpy({-0.7, 0.25}, a.data(), y1.data(), n * n);
                v->axpy({-0.7, 0.25}, a.data(), y2.data(), n * n);
                CHECK(max_diff(y1, y2) < 1e-14);
            }
    }
}

TEST_CASE("active table honours ANALOGC_KERNELS") {
    const char* forced = std::getenv("ANALOGC_KERNELS");
    const auto& t = active();
    CHECK(&active() == &t);
    if (forced && *forced && std::strcmp(forced, "auto") != 0) {
        CHECK(std::string(t.name) == forced);
    } else if (auto vs = variants(); !vs.empty()) {
        CHECK(&t == vs.front());
    } else {
        CHECK(&t == &scalar_table());
    }
}
