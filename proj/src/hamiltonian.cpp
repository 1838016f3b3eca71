#include "analogc/hamiltonian.hpp"

#include <cmath>

namespace analogc {

bool is_hermitian(const ConcreteHamiltonian& h, double tol) {
    for (const auto& [p, c] : h.terms())
        if (std::abs(c.imag()) > tol) return false;
    return true;
}

ConcreteHamiltonian real_part(const ConcreteHamiltonian& h) {
    ConcreteHamiltonian out;
    for (const auto& [p, c] : h.terms()) out.add_term(p, Complex(c.real(), 0.0));
    return out;
}

double coefficient_l1(const ConcreteHamiltonian& h, bool include_identity) {
    double s = 0.0;
    for (const auto& [p, c] : h.terms())
        if (include_identity || !p.is_identity()) s += std::abs(c);
    return s;
}

ConcreteHamiltonian commutator(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b) {
    return ham_mul(a, b) - ham_mul(b, a);
}

bool commutes(const ConcreteHamiltonian& a, const ConcreteHamiltonian& b, double tol) {
    // Scale the tolerance so large coefficients do not trip on rounding.
    double scale = std::max(1.0, coefficient_l1(a, true) * coefficient_l1(b, true));
    for (const auto& [p, c] : commutator(a, b).terms())
        if (std::abs(c) > tol * scale) return false;
    return true;
}

ConcreteHamiltonian evaluate(const ParamHamiltonian& h, const VarEnv& env) {
    ConcreteHamiltonian out;
    for (const auto& [p, c] : h.terms()) out.add_term(p, Complex(c.eval(env), 0.0));
    return out;
}

ParamHamiltonian to_param(const ConcreteHamiltonian& h) {
    ParamHamiltonian out;
    for (const auto& [p, c] : h.terms()) out.add_term(p, ScalarExpr(c.real()));
    return out;
}

}  // namespace analogc
