#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "analogc/aais.hpp"
#include "analogc/hml.hpp"

namespace analogc {

struct Layout {
    std::vector<SiteId> mapping;  // target site -> device site

    static Layout identity(std::size_t n);
    bool operator==(const Layout&) const = default;
};

struct SearchBudget {
    std::uint64_t max_nodes = 1'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class SearchStatus { Found, Exhausted, Timeout };

struct LayoutOutcome {
    SearchStatus status;
    Layout layout;
};

// Lazy backtracking enumeration of injective layouts with hole-match pruning.
class LayoutProposer {
public:
    LayoutProposer(const QuantumSystem& sys, const AAIS& aais, SearchBudget budget = {});
    LayoutOutcome next();
    std::uint64_t nodes_visited() const { return nodes_; }

private:
    struct Frame {
        std::size_t depth;
        std::vector<SiteId> candidates;
        std::size_t next = 0;
    };

    bool consistent() const;
    std::vector<SiteId> candidates_for_depth() const;
    void push_frame();

    std::size_t num_target_ = 0;
    std::size_t num_device_ = 0;
    std::vector<SiteId> order_;             // target sites in assignment order
    std::vector<PauliString> targets_;      // distinct non-identity target monomials
    std::vector<PauliString> device_monos_; // distinct non-identity device monomials
    std::vector<std::vector<SiteId>> device_adj_;
    SearchBudget budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::optional<SiteId>> assign_;
    std::vector<bool> used_;
    std::vector<Frame> stack_;
    bool started_ = false;
    bool done_ = false;
};

ConcreteHamiltonian map_hamiltonian(const Layout& layout, const ConcreteHamiltonian& h);

enum class VarRole { Global, Local, Time };

struct RealVar {
    VarRole role;
    std::uint32_t index = 0;        // global index, or local slot
    std::uint32_t instruction = 0;  // Local only
    std::uint32_t segment = 0;      // Local and Time
    double lower = -std::numeric_limits<double>::infinity();  // Time: exclusive lower bound 0
    std::string name;
};

struct BinaryVar {
    std::uint32_t instruction;
    std::uint32_t segment;
};

struct EquationTerm {
    static constexpr std::uint32_t kSystem = 0xffffffffu;
    ScalarExpr coeff;             // over globals (system) or the instruction's locals
    std::uint32_t instruction = kSystem;
};

// t_j * (sum of terms, instruction terms scaled by s_{k,j}) = rhs
struct Equation {
    std::uint32_t segment = 0;
    PauliString monomial;
    std::vector<EquationTerm> terms;
    double rhs = 0.0;
};

class EquationSystem {
public:
    const AAIS* aais = nullptr;
    std::size_t num_globals = 0;
    std::size_t num_instructions = 0;
    std::vector<double> durations;     // tau_j
    std::vector<Equation> equations;
    std::vector<PauliString> worklist; // Q in its final order

    std::size_t num_segments() const { return durations.size(); }
    // Variable layout: [globals][t_0..t_{N-1}][locals of (k, j) blocks].
    std::vector<RealVar> real_vars() const;
    std::vector<BinaryVar> binary_vars() const;
    std::size_t time_var(std::size_t segment) const { return num_globals + segment; }
    std::size_t local_var(std::size_t instruction, std::size_t segment, std::size_t slot) const;
    std::size_t binary_var(std::size_t instruction, std::size_t segment) const { return segment * num_instructions + instruction; }

private:
    friend EquationSystem build_equations(const Layout&, const std::vector<Segment>&, const AAIS&);
    std::vector<std::size_t> local_offset_;  // per instruction, offset inside a segment's local block
    std::size_t locals_per_segment_ = 0;
};

EquationSystem build_equations(const Layout& layout, const std::vector<Segment>& segments, const AAIS& aais);

// One line per equation: "[seg j][P] lhs = rhs".
std::string format_equations(const EquationSystem& eqs);

}  // namespace analogc
