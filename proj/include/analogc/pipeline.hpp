#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "analogc/emit.hpp"
#include "analogc/solver.hpp"
#include "analogc/synthesizer.hpp"
#include "analogc/verifier.hpp"

namespace analogc {

struct CompileOptions {
    std::uint32_t trotter = 4;
    std::uint32_t discretization = 1;   // recorded in metadata; steps are applied by the parser
    std::optional<double> tolerance;    // defaults to default_epsilon(sys)
    double delta = 1e-2;
    double timeout_s = 600.0;
    std::uint64_t max_nodes = 1'000'000;
    std::uint64_t seed = 0;
    int restarts = 8;
    int max_iterations = 500;
    std::size_t max_layouts = 16;       // solver attempts before giving up on the layout stream
    std::optional<Layout> layout;       // skip the search and use this layout
};

enum class CompileStatus { Success, NoSolution, Timeout };

const char* status_name(CompileStatus s);

struct CompileResult {
    CompileStatus status = CompileStatus::NoSolution;
    std::string message;
    Layout layout;
    double epsilon = 0.0;
    std::size_t layouts_tried = 0;
    std::uint64_t nodes_visited = 0;
    Solution solution;
    InstructionSchedule instructions;
    BlockSchedule blocks;
    SignalLineSchedule lines;
    CompileMetadata metadata;
};

// 0.05 * sum_j tau_j * ||H_j||_1 over non-identity terms, floored at 1e-9.
double default_epsilon(const QuantumSystem& sys);

CompileResult compile(const QuantumSystem& sys, const AAIS& aais, const CompileOptions& opts);

// Rebuilds the block sequence (nominal durations, index order) from an emitted schedule.
BlockSchedule blocks_from_lines(const SignalLineSchedule& sls, const AAIS& aais);

struct VerifyOptions {
    double C1 = 1.0, C2 = 1.0, C3 = 1.0;
    double Delta = 0.0;
};

struct VerifyReport {
    double residual = 0.0;
    double phase_distance = 0.0;
    double tv = 0.0;
    double lambda = 0.0;         // with the system Hamiltonian in each group
    double lambda_no_sys = 0.0;
    double trotter = 0.0;
    double total_bound = 0.0;
    std::size_t active_sites = 0;
};

// Compares the schedule against the target on the device sites it touches.
// Throws SizeGuardError when more than kMaxDenseSites sites are involved.
VerifyReport verify(const QuantumSystem& sys, const AAIS& aais, const PulseScheduleDoc& doc, const VerifyOptions& opts = {});

std::string format_report(const VerifyReport& r);

}  // namespace analogc
