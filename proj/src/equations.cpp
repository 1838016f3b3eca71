#include <cstdio>
#include <set>

#include "analogc/synthesizer.hpp"

namespace analogc {

std::size_t EquationSystem::local_var(std::size_t instruction, std::size_t segment, std::size_t slot) const {
    return num_globals + num_segments() + segment * locals_per_segment_ + local_offset_.at(instruction) + slot;
}

std::vector<RealVar> EquationSystem::real_vars() const {
    std::vector<RealVar> vars;
    for (std::uint32_t g = 0; g < num_globals; ++g) {
        vars.push_back({VarRole::Global, g, 0, 0, -std::numeric_limits<double>::infinity(), aais ? aais->global_names.at(g) : "g" + std::to_string(g)});
    }
    for (std::uint32_t j = 0; j < num_segments(); ++j) vars.push_back({VarRole::Time, 0, 0, j, 0.0, "t" + std::to_string(j)});
    for (std::uint32_t j = 0; j < num_segments(); ++j) {
        for (std::uint32_t k = 0; k < num_instructions; ++k) {
            const Instruction& ins = aais->instructions[k];
            for (std::uint32_t l = 0; l < ins.num_locals(); ++l) {
                vars.push_back({VarRole::Local, l, k, j, -std::numeric_limits<double>::infinity(),
                                ins.name + "." + ins.local_names[l] + "@" + std::to_string(j)});
            }
        }
    }
    return vars;
}

std::vector<BinaryVar> EquationSystem::binary_vars() const {
    std::vector<BinaryVar> out;
    for (std::uint32_t j = 0; j < num_segments(); ++j)
        for (std::uint32_t k = 0; k < num_instructions; ++k) out.push_back({k, j});
    return out;
}

EquationSystem build_equations(const Layout& layout, const std::vector<Segment>& segments, const AAIS& aais) {
    EquationSystem eqs;
    eqs.aais = &aais;
    eqs.num_globals = aais.num_globals();
    eqs.num_instructions = aais.instructions.size();
    for (const auto& ins : aais.instructions) {
        eqs.local_offset_.push_back(eqs.locals_per_segment_);
        eqs.locals_per_segment_ += ins.num_locals();
    }

    std::vector<ConcreteHamiltonian> targets;
    for (const auto& seg : segments) {
        targets.push_back(map_hamiltonian(layout, seg.ham));
        eqs.durations.push_back(seg.duration);
    }

    // Worklist: seeded with system and target monomials, closed under
    // "an instruction touching a monomial in Q brings all its monomials".
    std::vector<PauliString>& q = eqs.worklist;
    std::set<PauliString> in_q;
    auto push = [&](const PauliString& p) {
        if (in_q.insert(p).second) q.push_back(p);
    };
    if (!segments.empty()) {
        for (const auto& [p, c] : aais.sys_ham.terms()) push(p);
        for (const auto& t : targets)
            for (const auto& [p, c] : t.terms()) push(p);
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i].is_identity()) continue;
        for (const auto& ins : aais.instructions) {
            if (!ins.ham.contains(q[i])) continue;
            for (const auto& [p, c] : ins.ham.terms()) push(p);
        }
    }

    for (std::uint32_t j = 0; j < segments.size(); ++j) {
        for (const auto& p : q) {
            if (p.is_identity()) continue;
            Equation e;
            e.segment = j;
            e.monomial = p;
            if (aais.sys_ham.contains(p)) e.terms.push_back({aais.sys_ham.coeff(p), EquationTerm::kSystem});
            for (const auto& ins : aais.instructions) {
                if (ins.ham.contains(p)) e.terms.push_back({ins.ham.coeff(p), ins.id});
            }
            e.rhs = segments[j].duration * targets[j].coeff(p).real();
            if (e.terms.empty() && e.rhs == 0.0) continue;
            eqs.equations.push_back(std::move(e));
        }
    }
    return eqs;
}

std::string format_equations(const EquationSystem& eqs) {
    const AAIS& aais = *eqs.aais;
    std::string out;
    for (const auto& e : eqs.equations) {
        std::string lhs;
        for (const auto& term : e.terms) {
            if (!lhs.empty()) lhs += " + ";
            if (term.instruction == EquationTerm::kSystem) {
                lhs += term.coeff.str([&](VarRef r) { return aais.global_names.at(r.index); });
            } else {
                const Instruction& ins = aais.instructions[term.instruction];
                lhs += "s[" + ins.name + "]*" + term.coeff.str([&](VarRef r) { return ins.name + "." + ins.local_names.at(r.index); });
            }
        }
        if (lhs.empty()) lhs = "0";
        char rhs[40];
        std::snprintf(rhs, sizeof rhs, "%.10g", e.rhs);
        out += "[seg " + std::to_string(e.segment) + "][" + e.monomial.str() + "] t" + std::to_string(e.segment) + "*(" + lhs + ") = " + rhs + "\n";
    }
    return out;
}

}  // namespace analogc
