#include "analogc/aais.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace analogc {

double DurationModel::seconds(double nominal) const {
    return std::max(0.0, base_seconds + slope_seconds * nominal);
}

namespace {

constexpr DurationModel kDefault1Site{5e-8, 0.0};
constexpr DurationModel kDefault2Site{1.3e-7, 2.0e-7};

std::vector<Edge> normalize_edges(std::size_t n, const std::vector<Edge>& edges) {
    std::set<Edge> seen;
    std::vector<Edge> out;
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) {
            throw ConfigError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") references a site >= " + std::to_string(n));
        }
        if (a == b) throw ConfigError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") is a self-loop");
        Edge e{std::min(a, b), std::max(a, b)};
        if (seen.insert(e).second) out.push_back(e);
    }
    return out;
}

ParamHamiltonian scaled_pauli(SiteId site, PauliOp op, const ScalarExpr& c) {
    return ParamHamiltonian::term(PauliString::single(site, op), c);
}

ParamHamiltonian scaled_pair(SiteId j, PauliOp pj, SiteId k, PauliOp pk, const ScalarExpr& c) {
    return ParamHamiltonian::term(PauliString({{j, pj}, {k, pk}}), c);
}

// -Delta n_j + (Omega/2)(cos(phi) X_j - sin(phi) Y_j)
ParamHamiltonian rydberg_drive(SiteId j) {
    ScalarExpr delta = ScalarExpr::local(0), omega = ScalarExpr::local(1), phi = ScalarExpr::local(2);
    ParamHamiltonian h = (-delta) * number_op<ScalarExpr>(j);
    h += scaled_pauli(j, PauliOp::X, 0.5 * omega * cos(phi));
    h += scaled_pauli(j, PauliOp::Y, -(0.5 * omega * sin(phi)));
    return h;
}

void add_rydberg_system(AAIS& a, std::size_t n, double c6) {
    if (!(c6 > 0.0)) throw ConfigError("C6 must be positive");
    double spacing = std::pow(c6 / 4.0, 1.0 / 6.0);
    for (std::size_t j = 0; j < n; ++j) {
        a.global_names.push_back("x" + std::to_string(j));
        a.global_seed.push_back(static_cast<double>(j) * spacing);
    }
    for (SiteId j = 0; j < n; ++j) {
        for (SiteId k = j + 1; k < n; ++k) {
            ScalarExpr d = ScalarExpr::global(j) - ScalarExpr::global(k);
            ScalarExpr d2 = d * d;
            ScalarExpr coupling = ScalarExpr(c6) / (d2 * d2 * d2);
            a.sys_ham += coupling * (number_op<ScalarExpr>(j) * number_op<ScalarExpr>(k));
            a.separated_globals.emplace_back(j, k);
        }
    }
    a.sys_scaling = [](std::span<const double> g, double factor) {
        std::vector<double> out(g.begin(), g.end());
        if (out.empty()) return out;
        double stretch = std::pow(factor, 1.0 / 6.0);
        for (std::size_t j = 1; j < out.size(); ++j) out[j] = out[0] + (out[j] - out[0]) * stretch;
        return out;
    };
}

Instruction make_instruction(AAIS& a, std::string name, std::vector<std::string> locals, ParamHamiltonian ham, LineId line,
                             Nativeness nat, DurationModel dur, std::string family) {
    Instruction ins;
    ins.id = static_cast<InstructionId>(a.instructions.size());
    ins.name = std::move(name);
    ins.local_names = std::move(locals);
    ins.ham = std::move(ham);
    ins.signal_line = line;
    ins.nativeness = nat;
    ins.duration = dur;
    ins.family = std::move(family);
    return ins;
}

void add(AAIS& a, Instruction ins) { a.instructions.push_back(std::move(ins)); }

constexpr PauliOp kXYZ[] = {PauliOp::X, PauliOp::Y, PauliOp::Z};

void add_single_site_paulis(AAIS& a, std::size_t n) {
    for (SiteId j = 0; j < n; ++j) {
        for (PauliOp p : kXYZ) {
            add(a, make_instruction(a, "eta_" + std::to_string(j) + "_" + pauli_char(p), {"a"}, scaled_pauli(j, p, ScalarExpr::local(0)), j,
                                    Nativeness::Derived, kDefault1Site, kFamily1Site));
        }
    }
}

}  // namespace

const Instruction* AAIS::find(const std::string& instruction_name) const {
    for (const auto& ins : instructions)
        if (ins.name == instruction_name) return &ins;
    return nullptr;
}

void AAIS::validate() const {
    std::set<std::string> names;
    for (std::size_t k = 0; k < instructions.size(); ++k) {
        const auto& ins = instructions[k];
        if (ins.id != k) throw ConfigError("instruction '" + ins.name + "' has id out of order");
        if (!names.insert(ins.name).second) throw ConfigError("duplicate instruction name '" + ins.name + "'");
        auto support = ins.support();
        if (support.empty()) throw ConfigError("instruction '" + ins.name + "' acts on no site");
        if (support.back() >= num_sites) throw ConfigError("instruction '" + ins.name + "' acts outside the device");
        for (const auto& [p, c] : ins.ham.terms()) {
            std::set<VarRef> vars;
            c.collect_vars(vars);
            for (const auto& v : vars) {
                if (v.kind != VarKind::Local || v.index >= ins.num_locals()) {
                    throw ConfigError("instruction '" + ins.name + "' references an undeclared variable");
                }
            }
        }
    }
    for (const auto& [p, c] : sys_ham.terms()) {
        std::set<VarRef> vars;
        c.collect_vars(vars);
        for (const auto& v : vars) {
            if (v.kind != VarKind::Global || v.index >= num_globals()) throw ConfigError("system Hamiltonian references a non-global variable");
        }
        if (!p.is_identity() && p.max_site() >= num_sites) throw ConfigError("system Hamiltonian acts outside the device");
    }
    if (!global_seed.empty() && global_seed.size() != num_globals()) throw ConfigError("global seed size mismatch");
}

bool instructions_conflict(const Instruction& a, const Instruction& b) {
    if (a.signal_line == b.signal_line) return true;
    if (a.nativeness != Nativeness::Derived && b.nativeness != Nativeness::Derived) return false;
    auto sa = a.support(), sb = b.support();
    std::vector<SiteId> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    return !common.empty();
}

bool ConflictGraph::has_edge(InstructionId a, InstructionId b) const {
    const auto& adj = adjacency.at(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

ConflictGraph conflict_graph(const AAIS& aais) {
    ConflictGraph g;
    g.adjacency.resize(aais.instructions.size());
    for (std::size_t i = 0; i < aais.instructions.size(); ++i) {
        for (std::size_t j = i + 1; j < aais.instructions.size(); ++j) {
            if (instructions_conflict(aais.instructions[i], aais.instructions[j])) {
                g.adjacency[i].push_back(static_cast<InstructionId>(j));
                g.adjacency[j].push_back(static_cast<InstructionId>(i));
            }
        }
    }
    for (auto& a : g.adjacency) std::sort(a.begin(), a.end());
    return g;
}

std::vector<std::vector<SiteId>> device_adjacency(const AAIS& aais) {
    std::vector<std::set<SiteId>> adj(aais.num_sites);
    auto add_monomial = [&](const PauliString& p) {
        auto s = p.support();
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                adj[s[i]].insert(s[j]);
                adj[s[j]].insert(s[i]);
            }
    };
    for (const auto& ins : aais.instructions)
        for (const auto& [p, c] : ins.ham.terms()) add_monomial(p);
    for (const auto& [p, c] : aais.sys_ham.terms()) add_monomial(p);
    std::vector<std::vector<SiteId>> out(aais.num_sites);
    for (std::size_t i = 0; i < adj.size(); ++i) out[i].assign(adj[i].begin(), adj[i].end());
    return out;
}

AAIS build_ideal_rydberg(std::size_t n, double c6) {
    if (n < 1) throw ConfigError("ideal_rydberg needs at least one atom");
    AAIS a;
    a.name = "ideal_rydberg";
    a.num_sites = n;
    add_rydberg_system(a, n, c6);
    for (SiteId j = 0; j < n; ++j) {
        add(a, make_instruction(a, "eta_" + std::to_string(j), {"Delta", "Omega", "phi"}, rydberg_drive(j), j, Nativeness::Native,
                                kDefault1Site, kFamily1Site));
    }
    a.validate();
    return a;
}

AAIS build_global_rydberg(std::size_t n, double c6) {
    if (n < 1) throw ConfigError("global_rydberg needs at least one atom");
    AAIS a;
    a.name = "global_rydberg";
    a.num_sites = n;
    add_rydberg_system(a, n, c6);
    ParamHamiltonian h;
    for (SiteId j = 0; j < n; ++j) h += rydberg_drive(j);
    add(a, make_instruction(a, "eta_global", {"Delta", "Omega", "phi"}, std::move(h), 0, Nativeness::Native, kDefault1Site, kFamilyGlobal));
    a.validate();
    return a;
}

AAIS build_heisenberg(std::size_t n, const std::vector<Edge>& edges) {
    AAIS a;
    a.name = "heisenberg";
    a.num_sites = n;
    auto es = normalize_edges(n, edges);
    add_single_site_paulis(a, n);
    for (std::size_t e = 0; e < es.size(); ++e) {
        auto [j, k] = es[e];
        for (PauliOp p : kXYZ) {
            std::string tag{pauli_char(p), pauli_char(p)};
            add(a, make_instruction(a, "eta_" + std::to_string(j) + "_" + std::to_string(k) + "_" + tag, {"a"},
                                    scaled_pair(j, p, k, p, ScalarExpr::local(0)), static_cast<LineId>(n + e), Nativeness::Derived,
                                    kDefault2Site, kFamily2Site));
        }
    }
    a.validate();
    return a;
}

AAIS build_two_pauli(std::size_t n, const std::vector<Edge>& edges) {
    AAIS a;
    a.name = "two_pauli";
    a.num_sites = n;
    auto es = normalize_edges(n, edges);
    add_single_site_paulis(a, n);
    for (std::size_t e = 0; e < es.size(); ++e) {
        auto [j, k] = es[e];
        for (PauliOp p : kXYZ) {
            for (PauliOp q : kXYZ) {
                std::string tag{pauli_char(p), pauli_char(q)};
                add(a, make_instruction(a, "eta_" + std::to_string(j) + "_" + std::to_string(k) + "_" + tag, {"a"},
                                        scaled_pair(j, p, k, q, ScalarExpr::local(0)), static_cast<LineId>(n + e), Nativeness::Derived,
                                        kDefault2Site, kFamily2Site));
            }
        }
    }
    a.validate();
    return a;
}

AAIS build_ibm_native(std::size_t n, const std::vector<Edge>& edges, const IbmConstants& w) {
    AAIS a;
    a.name = "ibm_native";
    a.num_sites = n;
    auto es = normalize_edges(n, edges);
    for (SiteId j = 0; j < n; ++j) {
        for (PauliOp p : kXYZ) {
            bool virtual_z = p == PauliOp::Z;
            add(a, make_instruction(a, "eta_" + std::to_string(j) + "_" + pauli_char(p), {"a"}, scaled_pauli(j, p, ScalarExpr::local(0)), j,
                                    virtual_z ? Nativeness::Derived : Nativeness::Native, virtual_z ? DurationModel{0.0, 0.0} : kDefault1Site,
                                    virtual_z ? "eta_virtual_z" : kFamily1Site));
        }
    }
    for (auto [u, v] : es) {
        for (auto [j, k] : {Edge{u, v}, Edge{v, u}}) {
            ScalarExpr omega = ScalarExpr::local(0);
            ParamHamiltonian h = scaled_pair(j, PauliOp::Z, k, PauliOp::X, w.omega_zx * omega);
            h += scaled_pair(j, PauliOp::Z, k, PauliOp::Z, ScalarExpr(w.omega_zz));
            h += scaled_pauli(k, PauliOp::X, w.omega_ix * omega);
            h += scaled_pauli(j, PauliOp::Z, w.omega_zi * (omega * omega));
            add(a, make_instruction(a, "cr_" + std::to_string(j) + "_" + std::to_string(k), {"Omega"}, std::move(h), j, Nativeness::Native,
                                    kDefault2Site, kFamily2Site));
        }
    }
    a.validate();
    return a;
}

std::vector<std::string> builtin_aais_names() {
    return {"ideal_rydberg", "global_rydberg", "heisenberg", "two_pauli", "ibm_native"};
}

}  // namespace analogc
