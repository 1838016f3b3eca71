#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "analogc/kernels.hpp"
#include "analogc/verifier.hpp"

namespace analogc {

namespace {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void guard(std::size_t n) {
    if (n > kMaxDenseSites) {
        throw SizeGuardError("dense verification is limited to " + std::to_string(kMaxDenseSites) + " sites, got " + std::to_string(n));
    }
}

void same_shape(const DenseOperator& a, const DenseOperator& b) {
    if (a.n != b.n) throw std::invalid_argument("dense operators differ in site count");
}

EigenMatrix to_eigen(const DenseOperator& a) {
    return Eigen::Map<const EigenMatrix>(a.data.data(), static_cast<Eigen::Index>(a.dim()), static_cast<Eigen::Index>(a.dim()));
}

}  // namespace

DenseOperator DenseOperator::zeros(std::size_t n) {
    guard(n);
    DenseOperator d;
    d.n = n;
    d.data.assign(d.dim() * d.dim(), Complex{});
    return d;
}

DenseOperator DenseOperator::identity(std::size_t n) {
    DenseOperator d = zeros(n);
    for (std::size_t i = 0; i < d.dim(); ++i) d(i, i) = 1.0;
    return d;
}

DenseOperator to_dense(const ConcreteHamiltonian& h, std::size_t n) {
    DenseOperator out = DenseOperator::zeros(n);
    const std::size_t dim = out.dim();
    for (const auto& [p, coeff] : h.terms()) {
        std::size_t xmask = 0, zmask = 0;
        unsigned ny = 0;
        for (auto [site, op] : p.factors()) {
            if (site >= n) throw std::out_of_range("to_dense: site " + std::to_string(site) + " outside " + std::to_string(n) + " sites");
            std::size_t bit = std::size_t{1} << (n - 1 - site);
            if (op == PauliOp::X || op == PauliOp::Y) xmask |= bit;
            if (op == PauliOp::Z || op == PauliOp::Y) zmask |= bit;
            if (op == PauliOp::Y) ++ny;
        }
        static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        Complex base = coeff * kIPow[ny % 4];
        for (std::size_t c = 0; c < dim; ++c) {
            bool odd = std::popcount(c & zmask) & 1;
            out(c ^ xmask, c) += odd ? -base : base;
        }
    }
    return out;
}

DenseOperator multiply(const DenseOperator& a, const DenseOperator& b) {
    same_shape(a, b);
    DenseOperator c = DenseOperator::zeros(a.n);
    kernels::active().matmul(a.data.data(), b.data.data(), c.data.data(), a.dim());
    return c;
}

DenseOperator adjoint(const DenseOperator& a) {
    DenseOperator out = DenseOperator::zeros(a.n);
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) out(c, r) = std::conj(a(r, c));
    return out;
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
    same_shape(a, b);
    DenseOperator out = a;
    kernels::active().axpy(1.0, b.data.data(), out.data.data(), out.data.size());
    return out;
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    same_shape(a, b);
    DenseOperator out = a;
    kernels::active().axpy(-1.0, b.data.data(), out.data.data(), out.data.size());
    return out;
}

DenseOperator operator*(Complex s, const DenseOperator& a) {
    DenseOperator out = DenseOperator::zeros(a.n);
    kernels::active().axpy(s, a.data.data(), out.data.data(), out.data.size());
    return out;
}

double hermitian_defect(const DenseOperator& a) {
    double worst = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = r; c < a.dim(); ++c) worst = std::max(worst, std::abs(a(r, c) - std::conj(a(c, r))));
    return worst;
}

double unitarity_defect(const DenseOperator& u) {
    DenseOperator g = multiply(adjoint(u), u);
    double worst = 0.0;
    for (std::size_t r = 0; r < u.dim(); ++r)
        for (std::size_t c = 0; c < u.dim(); ++c) worst = std::max(worst, std::abs(g(r, c) - (r == c ? 1.0 : 0.0)));
    return worst;
}

std::vector<double> hermitian_eigenvalues(const DenseOperator& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(h), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue decomposition failed");
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double spectral_norm(const DenseOperator& a) {
    // Largest singular value: sqrt of the top eigenvalue of A^dagger A.
    DenseOperator gram = multiply(adjoint(a), a);
    for (std::size_t r = 0; r < gram.dim(); ++r) {
        gram(r, r) = gram(r, r).real();
        for (std::size_t c = r + 1; c < gram.dim(); ++c) gram(c, r) = std::conj(gram(r, c));
    }
    auto ev = hermitian_eigenvalues(gram);
    return ev.empty() ? 0.0 : std::sqrt(std::max(0.0, ev.back()));
}

DenseOperator hermitian_exp(const DenseOperator& h, double tau) {
    if (double d = hermitian_defect(h); d > 1e-10) {
        throw std::invalid_argument("hermitian_exp: operator is not Hermitian (defect " + std::to_string(d) + ")");
    }
    if (tau == 0.0) return DenseOperator::identity(h.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(h));
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const std::size_t dim = h.dim();
    DenseOperator v = DenseOperator::zeros(h.n);
    Eigen::Map<EigenMatrix>(v.data.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) = es.eigenvectors();
    std::vector<Complex> phases(dim);
    for (std::size_t i = 0; i < dim; ++i) phases[i] = std::polar(1.0, -tau * es.eigenvalues()[static_cast<Eigen::Index>(i)]);
    DenseOperator w = DenseOperator::zeros(h.n), out = DenseOperator::zeros(h.n);
    const auto& k = kernels::active();
    k.scale_columns(v.data.data(), phases.data(), w.data.data(), dim);
    k.matmul_adjoint(w.data.data(), v.data.data(), out.data.data(), dim);
    return out;
}

DenseOperator evolve(const std::vector<Segment>& segments, std::size_t n) {
    DenseOperator u = DenseOperator::identity(n);
    for (const auto& seg : segments) {
        if (!is_hermitian(seg.ham, 1e-10)) throw std::invalid_argument("evolve: segment Hamiltonian is not Hermitian");
        if (seg.duration == 0.0) continue;
        u = multiply(hermitian_exp(to_dense(seg.ham, n), seg.duration), u);
    }
    return u;
}

double phase_aligned_distance(const DenseOperator& u, const DenseOperator& v) {
    same_shape(u, v);
    Complex tr{};
    for (std::size_t i = 0; i < u.data.size(); ++i) tr += std::conj(v.data[i]) * u.data[i];
    Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex{1.0};
    return spectral_norm(u - phase * v);
}

double tv_distance(const DenseOperator& u, const DenseOperator& v) {
    same_shape(u, v);
    double total = 0.0;
    for (std::size_t s = 0; s < u.dim(); ++s) total += std::abs(std::norm(u(s, 0)) - std::norm(v(s, 0)));
    return 0.5 * total;
}

}  // namespace analogc
