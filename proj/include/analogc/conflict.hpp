#pragma once

#include <functional>
#include <vector>

#include "analogc/schedule.hpp"

namespace analogc {

using Groups = std::vector<std::vector<std::size_t>>;

// Greedy coloring, largest degree first, ties by index. Groups come in color
// order with members ascending.
Groups group_executions(std::size_t count, const std::function<bool(std::size_t, std::size_t)>& conflicts);
Groups group_executions(const std::vector<Execution>& executions, const AAIS& aais);

ConcreteHamiltonian execution_hamiltonian(const Execution& e, const AAIS& aais);
ConcreteHamiltonian system_hamiltonian(const AAIS& aais, const std::vector<double>& globals);

struct CommutingSplit {
    Groups standalone;              // conflict-free groups of peeled executions
    std::vector<std::size_t> rest;  // executions left for Trotterization
};

// Peels executions that commute with every other execution and with sys.
CommutingSplit split_commuting(const std::vector<Execution>& executions, const AAIS& aais, const ConcreteHamiltonian& sys);

class TrotterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxOrderedGroups = 6;
inline constexpr std::size_t kDenseOrderGroups = 4;
inline constexpr std::size_t kDenseOrderSites = 8;

// Order of the groups inside one Trotter step. Blocks of a step are unordered in
// the DAG, so any order is valid. Small steps (at most kDenseOrderGroups groups on
// at most kDenseOrderSites sites) take the order whose R-fold product is closest
// to the exact evolution in phase-aligned spectral distance. Larger ones up to
// kMaxOrderedGroups minimize the coefficient l1 norm of the first-order term
// sum_{i<j} [H_j, H_i]. Ties keep the lexicographically first order.
std::vector<std::size_t> trotter_step_order(const std::vector<ConcreteHamiltonian>& groups, double step, std::uint32_t repetitions);

BlockSchedule trotterize(const InstructionSchedule& sched, std::uint32_t repetitions, const AAIS& aais);

// (Lambda*T)^2/(D*R) * exp(Lambda*T/(D*R))
double trotter_error_bound(double lambda, double T, double D, double R);

}  // namespace analogc
