#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "analogc/schedule.hpp"
#include "analogc/synthesizer.hpp"

namespace analogc {

struct SolverOptions {
    double epsilon = 0.05;
    double delta = 1e-2;
    int max_iterations = 500;
    int restarts = 8;
    std::uint64_t rng_seed = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct Solution {
    std::vector<double> g;
    std::vector<std::vector<double>> a;  // indexed by EquationSystem::binary_var(k, j)
    std::vector<bool> s;                 // same indexing
    std::vector<double> t;               // per segment
    double e = 0.0;
};

enum class SolveStatus { Accepted, Infeasible, Timeout };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    Solution solution;  // best found, accepted or not
};

SolveResult solve(const EquationSystem& eqs, const SolverOptions& opts);

// Sum over equations of |lhs - rhs| with binaries taken from sol.s.
double residual(const EquationSystem& eqs, const Solution& sol);
std::vector<double> equation_residuals(const EquationSystem& eqs, const Solution& sol);

InstructionSchedule to_instruction_schedule(const Solution& sol, const EquationSystem& eqs);

// Residuals over the natural variable vector z = [real vars..., relaxed binaries...]
// with the real-variable order of EquationSystem::real_vars().
class ResidualModel {
public:
    explicit ResidualModel(const EquationSystem& eqs);

    std::size_t num_real() const { return num_real_; }
    std::size_t num_binary() const { return num_binary_; }
    std::size_t size() const { return num_real_ + num_binary_; }

    Eigen::VectorXd residuals(const std::vector<double>& z) const;
    Eigen::MatrixXd jacobian(const std::vector<double>& z) const;

    // Residuals (and optionally Jacobian columns) restricted to a subset of equations.
    // column[v] maps a z index to a Jacobian column, or -1 when the variable is held fixed.
    void evaluate(const std::vector<double>& z, std::span<const std::size_t> equations, Eigen::VectorXd& r, Eigen::MatrixXd* jac,
                  std::span<const int> column) const;

    // Per-binary strength sum_P |t_j * coeff * s_hat| used by rounding.
    std::vector<double> indicator_strength(const std::vector<double>& z) const;

    struct Term {
        const ScalarExpr* coeff;
        std::vector<std::pair<std::size_t, ScalarExpr>> partials;  // z index, derivative
        std::size_t binary;  // z index of the relaxed binary, or npos for system terms
        std::uint32_t instruction;
    };
    struct Row {
        std::size_t time;
        std::uint32_t segment;
        double rhs;
        std::vector<Term> terms;
    };
    const std::vector<Row>& rows() const { return rows_; }

private:
    double coefficient(const Term& term, const std::vector<double>& z, std::uint32_t segment, VarEnv& env) const;
    void bind_env(const Term& term, const std::vector<double>& z, std::uint32_t segment, VarEnv& env) const;

    const EquationSystem* eqs_;
    std::size_t num_real_;
    std::size_t num_binary_;
    std::vector<Row> rows_;
};

// s_{k,j} = 1 iff strength > delta.
std::vector<bool> round_indicators(const ResidualModel& model, const std::vector<double>& z, double delta);

}  // namespace analogc
