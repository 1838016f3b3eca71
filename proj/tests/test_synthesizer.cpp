#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "analogc/hml.hpp"
#include "analogc/solver.hpp"
#include "analogc/synthesizer.hpp"
#include "oracle.hpp"

using namespace analogc;

namespace {

PauliString P(const char* tag) { return PauliString::parse(tag); }

const char* kIsing =
    "system ising3 { sites q[3]; evolve for 1 under q[0].Z * q[1].Z + q[1].Z * q[2].Z + q[0].X + q[1].X + q[2].X; }";

std::vector<Edge> line(std::size_t n) {
    std::vector<Edge> e;
    for (SiteId j = 0; j + 1 < n; ++j) e.emplace_back(j, j + 1);
    return e;
}

std::vector<Layout> all_yields(const QuantumSystem& sys, const AAIS& aais) {
    LayoutProposer prop(sys, aais);
    std::vector<Layout> out;
    for (;;) {
        auto o = prop.next();
        if (o.status != SearchStatus::Found) {
            REQUIRE(o.status == SearchStatus::Exhausted);
            return out;
        }
        out.push_back(o.layout);
    }
}

std::vector<Layout> all_injective(std::size_t n, std::size_t m) {
    std::vector<Layout> out;
    std::vector<SiteId> pick(m);
    for (SiteId i = 0; i < m; ++i) pick[i] = i;
    // Every n-subset in every order: permutations of m taken n at a time.
    std::set<std::vector<SiteId>> seen;
    do {
        std::vector<SiteId> head(pick.begin(), pick.begin() + static_cast<long>(n));
        if (seen.insert(head).second) out.push_back({head});
    } while (std::next_permutation(pick.begin(), pick.end()));
    return out;
}

Solution reference_assignment(const EquationSystem& eqs) {
    Solution sol;
    sol.g = {0.0, 10.52, 21.04};
    sol.t = {1.0};
    const double deltas[] = {2.032, 4.0, 2.032};
    sol.a.resize(eqs.binary_vars().size());
    sol.s.assign(eqs.binary_vars().size(), true);
    for (std::size_t k = 0; k < 3; ++k) sol.a[eqs.binary_var(k, 0)] = {deltas[k], 2.0, 0.0};
    return sol;
}

}  // namespace

TEST_CASE("identity layout is among the running example's layouts") {
    auto sys = hml::parse_system(kIsing);
    auto aais = build_ideal_rydberg(3, 5.42e6);
    auto layouts = all_yields(sys, aais);
    CHECK(std::find(layouts.begin(), layouts.end(), Layout::identity(3)) != layouts.end());
}

TEST_CASE("six-site cycle has no layout on a six-site line") {
    std::string text = "system c { sites q[6]; evolve for 1 under ";
    for (int j = 0; j < 6; ++j) text += "q[" + std::to_string(j) + "].Z * q[" + std::to_string((j + 1) % 6) + "].Z + ";
    text += "q[0].X; }";
    auto sys = hml::parse_system(text);
    auto aais = build_heisenberg(6, line(6));
    CHECK(all_yields(sys, aais).empty());
}

TEST_CASE("unconstrained two-site target yields both permutations") {
    auto sys = hml::parse_system("system s { sites q[2]; evolve for 1 under q[0].X + q[1].X; }");
    auto aais = build_heisenberg(2, {{0, 1}});
    auto layouts = all_yields(sys, aais);
    CHECK(layouts.size() == 2);
}

TEST_CASE("node budget produces a timeout") {
    auto sys = hml::parse_system(kIsing);
    auto aais = build_heisenberg(6, line(6));
    LayoutProposer prop(sys, aais, SearchBudget{1, std::nullopt});
    CHECK(prop.next().status == SearchStatus::Timeout);
}

TEST_CASE("map_hamiltonian relabels sites") {
    ConcreteHamiltonian h = ConcreteHamiltonian::term(P("Z0X1"), 0.7);
    auto swapped = map_hamiltonian(Layout{{1, 0}}, h);
    CHECK(swapped.coeff(P("X0Z1")).real() == 0.7);
    CHECK(map_hamiltonian(Layout::identity(2), h) == h);
    CHECK_THROWS(map_hamiltonian(Layout{{0}}, h));

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = oracle::random_hamiltonian(rng, 3, 8, true);
        Layout l{{4, 0, 2}};
        auto m = map_hamiltonian(l, r);
        CHECK(m.size() == r.size());
        for (const auto& [p, c] : r.terms()) {
            std::vector<PauliString::Factor> f;
            for (auto [s, op] : p.factors()) f.emplace_back(l.mapping[s], op);
            CHECK(m.coeff(PauliString(f)) == c);
        }
    }
}

TEST_CASE("running example equation system") {
    auto sys = hml::parse_system(kIsing);
    auto aais = build_ideal_rydberg(3, 5.42e6);
    auto eqs = build_equations(Layout::identity(3), sys.segments, aais);
    REQUIRE(eqs.equations.size() == 12);

    std::map<std::string, double> rhs;
    for (const auto& e : eqs.equations) rhs[e.monomial.str()] = e.rhs;
    const std::map<std::string, double> expect = {{"Z0Z1", 1}, {"Z1Z2", 1}, {"Z0Z2", 0}, {"Z0", 0}, {"Z1", 0}, {"Z2", 0},
                                                  {"X0", 1},   {"X1", 1},   {"X2", 1},   {"Y0", 0}, {"Y1", 0}, {"Y2", 0}};
    CHECK(rhs == expect);

    auto vars = eqs.real_vars();
    CHECK(std::count_if(vars.begin(), vars.end(), [](const RealVar& v) { return v.role == VarRole::Time; }) == 1);
    CHECK(eqs.binary_vars().size() == 3);

    auto sol = reference_assignment(eqs);
    auto res = equation_residuals(eqs, sol);
    REQUIRE(res.size() == 12);
    for (std::size_t i = 0; i < res.size(); ++i) {
        INFO(eqs.equations[i].monomial.str());
        CHECK(res[i] <= 0.02);
    }
    double e = residual(eqs, sol);
    CHECK(e > 0.0);
    CHECK(e <= 0.05);
    // The Z0Z2 row alone accounts for roughly 0.016.
    auto z02 = std::find_if(eqs.equations.begin(), eqs.equations.end(), [](const Equation& q) { return q.monomial == P("Z0Z2"); });
    CHECK(res[static_cast<std::size_t>(z02 - eqs.equations.begin())] == doctest::Approx(0.0159).epsilon(0.05));
}

TEST_CASE("empty segment list") {
    auto aais = build_ideal_rydberg(3, 5.42e6);
    auto eqs = build_equations(Layout::identity(3), {}, aais);
    CHECK(eqs.equations.empty());
    CHECK(eqs.binary_vars().empty());
    CHECK(eqs.real_vars().size() == 3);
}

TEST_CASE("X0X1 on two-site Heisenberg by hand") {
    // Q starts as {X0X1}; only eta_0_1_XX carries it and it has no other monomial.
    auto sys = hml::parse_system("system s { sites q[2]; evolve for 0.5 under 2 * q[0].X * q[1].X; }");
    auto aais = build_heisenberg(2, {{0, 1}});
    auto eqs = build_equations(Layout::identity(2), sys.segments, aais);
    REQUIRE(eqs.equations.size() == 1);
    CHECK(eqs.equations[0].monomial == P("X0X1"));
    REQUIRE(eqs.equations[0].terms.size() == 1);
    CHECK(aais.instructions[eqs.equations[0].terms[0].instruction].name == "eta_0_1_XX");
    CHECK(eqs.equations[0].rhs == 1.0);
}

TEST_CASE("worklist closure and equation uniqueness") {
    std::mt19937_64 rng(21);
    std::vector<AAIS> machines = {build_ideal_rydberg(3, 5.42e6), build_ibm_native(3, line(3), {}), build_heisenberg(3, line(3)),
                                  build_two_pauli(3, line(3))};
    for (const auto& aais : machines) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Segment> segs;
            for (int j = 0; j < 2; ++j) segs.push_back({oracle::random_hamiltonian(rng, 3, 4, true), 0.5 + j});
            auto eqs = build_equations(Layout::identity(3), segs, aais);
            std::set<std::pair<std::uint32_t, PauliString>> keys;
            std::size_t nvars = eqs.real_vars().size();
            for (const auto& e : eqs.equations) {
                CHECK_FALSE(e.monomial.is_identity());
                CHECK(keys.insert({e.segment, e.monomial}).second);
                for (const auto& t : e.terms) {
                    std::set<VarRef> refs;
                    t.coeff.collect_vars(refs);
                    for (auto r : refs) {
                        if (r.kind == VarKind::Global) CHECK(r.index < eqs.num_globals);
                        else CHECK(r.index < aais.instructions[t.instruction].num_locals());
                    }
                }
                CHECK(eqs.time_var(e.segment) < nvars);
            }
            for (const auto& e : eqs.equations)
                for (const auto& t : e.terms) {
                    if (t.instruction == EquationTerm::kSystem) continue;
                    for (const auto& [p, c] : aais.instructions[t.instruction].ham.terms())
                        if (!p.is_identity()) CHECK(keys.count({e.segment, p}) == 1);
                }
        }
    }
}

TEST_CASE("pruned layouts leave an unmatched target term") {
    std::mt19937_64 rng(8);
    std::vector<AAIS> machines = {build_heisenberg(4, line(4)), build_heisenberg(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}})};
    const char* targets[] = {
        "system s { sites q[3]; evolve for 1 under q[0].Z * q[1].Z + q[1].Z * q[2].Z + q[0].X; }",
        "system s { sites q[3]; evolve for 1 under q[0].Z * q[1].Z + q[1].Z * q[2].Z + q[2].Z * q[0].Z; }",
        "system s { sites q[2]; evolve for 1 under q[0].X * q[1].X; }",
        "system s { sites q[3]; evolve for 1 under q[0].Y * q[2].Y + q[1].X; }",
    };
    for (const auto& aais : machines) {
        for (const char* text : targets) {
            auto sys = hml::parse_system(text);
            auto yielded = all_yields(sys, aais);
            for (const auto& l : all_injective(sys.num_sites(), aais.num_sites)) {
                bool kept = std::find(yielded.begin(), yielded.end(), l) != yielded.end();
                auto eqs = build_equations(l, sys.segments, aais);
                bool dead = std::any_of(eqs.equations.begin(), eqs.equations.end(),
                                        [](const Equation& e) { return e.terms.empty() && e.rhs != 0.0; });
                CHECK(kept == !dead);
            }
        }
    }
}

TEST_CASE("format_equations prints one line per equation") {
    auto sys = hml::parse_system(kIsing);
    auto aais = build_ideal_rydberg(3, 5.42e6);
    auto eqs = build_equations(Layout::identity(3), sys.segments, aais);
    auto text = format_equations(eqs);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
    CHECK(text.find("[seg 0][Z0Z1]") != std::string::npos);
}
