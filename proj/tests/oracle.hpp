#pragma once

// Reference implementations that share no code with the library: explicit
// Kronecker products, Taylor exponentials, cyclic Jacobi eigenvalues.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "analogc/hamiltonian.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct Mat {
    std::size_t d = 0;
    std::vector<cplx> a;

    explicit Mat(std::size_t dim = 0) : d(dim), a(dim * dim) {}
    cplx& operator()(std::size_t r, std::size_t c) { return a[r * d + c]; }
    cplx operator()(std::size_t r, std::size_t c) const { return a[r * d + c]; }

    static Mat eye(std::size_t dim) {
        Mat m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    Mat out(x.d);
    for (std::size_t i = 0; i < x.d; ++i)
        for (std::size_t k = 0; k < x.d; ++k) {
            cplx v = x(i, k);
            if (v == cplx{}) continue;
            for (std::size_t j = 0; j < x.d; ++j) out(i, j) += v * y(k, j);
        }
    return out;
}

inline Mat operator+(Mat x, const Mat& y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
    return x;
}

inline Mat operator-(Mat x, const Mat& y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
    return x;
}

inline Mat operator*(cplx s, Mat x) {
    for (auto& v : x.a) v *= s;
    return x;
}

inline Mat dagger(const Mat& x) {
    Mat out(x.d);
    for (std::size_t i = 0; i < x.d; ++i)
        for (std::size_t j = 0; j < x.d; ++j) out(j, i) = std::conj(x(i, j));
    return out;
}

inline Mat kron(const Mat& x, const Mat& y) {
    Mat out(x.d * y.d);
    for (std::size_t i = 0; i < x.d; ++i)
        for (std::size_t j = 0; j < x.d; ++j)
            for (std::size_t k = 0; k < y.d; ++k)
                for (std::size_t l = 0; l < y.d; ++l) out(i * y.d + k, j * y.d + l) = x(i, j) * y(k, l);
    return out;
}

inline Mat pauli(char c) {
    Mat m(2);
    const cplx i{0.0, 1.0};
    switch (c) {
        case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
        case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
        case 'Y': m(0, 1) = -i; m(1, 0) = i; break;
        case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
    }
    return m;
}

// Site 0 is the leftmost Kronecker factor.
inline Mat string_matrix(const analogc::PauliString& p, std::size_t n) {
    Mat m = Mat::eye(1);
    for (std::size_t s = 0; s < n; ++s) m = kron(m, pauli(analogc::pauli_char(p.at(static_cast<analogc::SiteId>(s)))));
    return m;
}

inline Mat ham_matrix(const analogc::ConcreteHamiltonian& h, std::size_t n) {
    Mat m(std::size_t{1} << n);
    for (const auto& [p, c] : h.terms()) m = m + c * string_matrix(p, n);
    return m;
}

inline double max_abs(const Mat& x) {
    double best = 0.0;
    for (const auto& v : x.a) best = std::max(best, std::abs(v));
    return best;
}

inline cplx trace(const Mat& x) {
    cplx t{};
    for (std::size_t i = 0; i < x.d; ++i) t += x(i, i);
    return t;
}

inline double frobenius(const Mat& x) {
    double s = 0.0;
    for (const auto& v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

// exp(-i tau H) by scaling and squaring with a long Taylor series.
inline Mat expm_minus_i(const Mat& h, double tau) {
    Mat a = cplx{0.0, -tau} * h;
    double norm = frobenius(a);
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    a = cplx{std::ldexp(1.0, -squarings), 0.0} * a;
    Mat term = Mat::eye(h.d);
    Mat sum = Mat::eye(h.d);
    for (int k = 1; k <= 24; ++k) {
        term = cplx{1.0 / k, 0.0} * (term * a);
        sum = sum + term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Eigenvalues of a real symmetric matrix (row-major) by cyclic Jacobi sweeps.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t d) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) {
                double apq = a[p * d + q];
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    double akp = a[k * d + p], akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double apk = a[p * d + k], aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(d);
    for (std::size_t i = 0; i < d; ++i) ev[i] = a[i * d + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Largest singular value via power iteration on X^dagger X.
inline double spectral_norm(const Mat& x, int iterations = 400) {
    Mat g = dagger(x) * x;
    std::vector<cplx> v(x.d);
    for (std::size_t i = 0; i < x.d; ++i) v[i] = cplx{1.0 + 0.1 * static_cast<double>(i % 7), 0.3 * static_cast<double>(i % 3)};
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<cplx> w(x.d);
        for (std::size_t i = 0; i < x.d; ++i)
            for (std::size_t j = 0; j < x.d; ++j) w[i] += g(i, j) * v[j];
        double nrm = 0.0;
        for (const auto& c : w) nrm += std::norm(c);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        for (std::size_t i = 0; i < x.d; ++i) v[i] = w[i] / nrm;
        lambda = nrm;
    }
    return std::sqrt(lambda);
}

// min over phi of ||U - e^{i phi} V|| with phi taken from the trace.
inline double phase_distance(const Mat& u, const Mat& v) {
    cplx tr = trace(dagger(v) * u);
    double phi = std::arg(tr);
    return spectral_norm(u - std::polar(1.0, phi) * v);
}

inline analogc::PauliString random_string(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> op(0, 3);
    std::vector<analogc::PauliString::Factor> f;
    for (std::size_t s = 0; s < n; ++s) {
        int o = op(rng);
        if (o != 0) f.emplace_back(static_cast<analogc::SiteId>(s), static_cast<analogc::PauliOp>(o));
    }
    return analogc::PauliString(std::move(f));
}

inline analogc::ConcreteHamiltonian random_hamiltonian(std::mt19937_64& rng, std::size_t n, std::size_t terms, bool hermitian) {
    std::normal_distribution<double> g(0.0, 1.0);
    analogc::ConcreteHamiltonian h;
    for (std::size_t k = 0; k < terms; ++k) {
        cplx c{g(rng), hermitian ? 0.0 : g(rng)};
        h.add_term(random_string(rng, n), c);
    }
    return h;
}

}  // namespace oracle
