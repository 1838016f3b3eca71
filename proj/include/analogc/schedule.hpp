#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "analogc/aais.hpp"

namespace analogc {

struct Execution {
    InstructionId instruction = 0;
    std::vector<double> locals;

    bool operator==(const Execution&) const = default;
};

struct ScheduleSegment {
    std::vector<Execution> executions;
    double duration = 0.0;
};

// Globals plus a sequence of simultaneous instruction sets with durations.
struct InstructionSchedule {
    std::vector<double> globals;
    std::vector<ScheduleSegment> segments;
};

struct Block {
    std::vector<Execution> executions;
    double duration = 0.0;
    std::uint32_t segment = 0;
    std::uint32_t group = 0;       // color index inside the segment; standalone blocks come first
    std::uint32_t repetition = 0;  // Trotter step, 0 for single-shot blocks
    bool trotterized = false;      // one of several non-commuting groups split into R steps
};

// Temporal DAG of conflict-free blocks. Block indices are a topological order.
struct BlockSchedule {
    std::vector<double> globals;
    std::vector<Block> blocks;
    std::vector<std::vector<std::uint32_t>> successors;
    std::vector<std::uint32_t> trotter_groups;  // per segment: group count that was Trotterized (0 or 1 means none)

    std::vector<std::vector<std::uint32_t>> predecessors() const;
    std::size_t num_edges() const;
};

struct TimedExecution {
    std::string instruction;
    std::map<std::string, double> params;
    double start_s = 0.0;
    double end_s = 0.0;
    double nominal_duration = 0.0;
    std::uint32_t block = 0;

    bool operator==(const TimedExecution&) const = default;
};

struct BlockTiming {
    std::uint32_t block = 0;
    std::uint32_t segment = 0;
    std::uint32_t group = 0;
    std::uint32_t repetition = 0;
    double nominal_duration = 0.0;
    double start_s = 0.0;
    double end_s = 0.0;
    bool trotterized = false;

    bool operator==(const BlockTiming&) const = default;
};

// Self-describing per-line schedule; instruction and parameter names resolve against the AAIS.
struct SignalLineSchedule {
    std::string aais;
    std::map<std::string, double> globals;
    std::map<LineId, std::vector<TimedExecution>> lines;
    std::vector<BlockTiming> blocks;
    double total_duration_s = 0.0;

    bool operator==(const SignalLineSchedule&) const = default;
};

}  // namespace analogc
