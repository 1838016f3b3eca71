#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "analogc/pauli.hpp"
#include "analogc/scalar_expr.hpp"

namespace analogc {

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Complex> {
    static constexpr double prune_threshold = 1e-15;
    static bool is_zero(const Complex& c) { return std::abs(c) <= prune_threshold; }
    static Complex with_phase(const Complex& c, Phase p) { return c * p.value(); }
};

template <>
struct CoeffTraits<ScalarExpr> {
    static bool is_zero(const ScalarExpr& c) { return c.is_zero(); }
    // Parameterized coefficients are real; an imaginary phase cannot be represented.
    static ScalarExpr with_phase(const ScalarExpr& c, Phase p) {
        if (p.quarter_turns == 0) return c;
        if (p.quarter_turns == 2) return -c;
        throw std::domain_error("imaginary phase in a parameterized Hamiltonian product");
    }
};

template <class C>
class HamiltonianMap {
public:
    using Coefficient = C;
    using Terms = std::map<PauliString, C>;

    HamiltonianMap() = default;

    static HamiltonianMap term(const PauliString& p, const C& c) {
        HamiltonianMap h;
        h.add_term(p, c);
        return h;
    }

    static HamiltonianMap identity(const C& c) { return term(PauliString{}, c); }

    void add_term(const PauliString& p, const C& c) {
        auto it = terms_.find(p);
        if (it == terms_.end()) {
            if (!CoeffTraits<C>::is_zero(c)) terms_.emplace(p, c);
            return;
        }
        it->second = it->second + c;
        if (CoeffTraits<C>::is_zero(it->second)) terms_.erase(it);
    }

    C coeff(const PauliString& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? C{} : it->second;
    }

    bool contains(const PauliString& p) const { return terms_.count(p) != 0; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // Union of non-identity sites over all monomials, ascending.
    std::vector<SiteId> support() const {
        std::vector<bool> seen;
        std::vector<SiteId> out;
        for (const auto& [p, c] : terms_) {
            for (const auto& [site, op] : p.factors()) {
                if (site >= seen.size()) seen.resize(site + 1, false);
                if (!seen[site]) {
                    seen[site] = true;
                    out.push_back(site);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    HamiltonianMap& operator+=(const HamiltonianMap& o) {
        for (const auto& [p, c] : o.terms_) add_term(p, c);
        return *this;
    }

    HamiltonianMap& operator-=(const HamiltonianMap& o) {
        for (const auto& [p, c] : o.terms_) add_term(p, C{} - c);
        return *this;
    }

    friend HamiltonianMap operator+(HamiltonianMap a, const HamiltonianMap& b) { return a += b; }
    friend HamiltonianMap operator-(HamiltonianMap a, const HamiltonianMap& b) { return a -= b; }

    friend HamiltonianMap operator*(const C& s, const HamiltonianMap& h) {
        HamiltonianMap out;
        for (const auto& [p, c] : h.terms_) out.add_term(p, s * c);
        return out;
    }

    friend HamiltonianMap operator*(const HamiltonianMap& a, const HamiltonianMap& b) {
        HamiltonianMap out;
        for (const auto& [p, cp] : a.terms_) {
            for (const auto& [q, cq] : b.terms_) {
                auto prod = string_mul(p, q);
                out.add_term(prod.result, CoeffTraits<C>::with_phase(cp * cq, prod.phase));
            }
        }
        return out;
    }

    bool operator==(const HamiltonianMap&) const = default;

private:
    Terms terms_;
};

using ConcreteHamiltonian = HamiltonianMap<Complex>;
using ParamHamiltonian = HamiltonianMap<ScalarExpr>;

inline ConcreteHamiltonian ham_add(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b) { return a + b; }
inline ConcreteHamiltonian ham_sub(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b) { return a - b; }
inline ConcreteHamiltonian ham_scale(Complex s, const ConcreteHamiltonian& h) { return s * h; }
inline ConcreteHamiltonian ham_mul(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b) { return a * b; }

bool is_hermitian(const ConcreteHamiltonian& h, double tol = 1e-12);
// Drops imaginary parts; callers check is_hermitian first.
ConcreteHamiltonian real_part(const ConcreteHamiltonian& h);
// Sum of |coefficient| over non-identity monomials.
double coefficient_l1(const ConcreteHamiltonian& h, bool include_identity = false);
// [a, b] = ab - ba.
ConcreteHamiltonian commutator(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b);
bool commutes(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b, double tol = 1e-12);

ConcreteHamiltonian evaluate(const ParamHamiltonian& h, const VarEnv& env);
ParamHamiltonian to_param(const ConcreteHamiltonian& h);  // real parts only

// n(q) = (I - Z_q)/2
template <class C>
HamiltonianMap<C> number_op(SiteId site) {
    HamiltonianMap<C> h;
    h.add_term(PauliString{}, C(0.5));
    h.add_term(PauliString::single(site, PauliOp::Z), C(-0.5));
    return h;
}

template <class C>
HamiltonianMap<C> pauli_term(SiteId site, PauliOp op, const C& c = C(1.0)) {
    return HamiltonianMap<C>::term(PauliString::single(site, op), c);
}

}  // namespace analogc
