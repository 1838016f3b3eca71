#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "analogc/aais.hpp"
#include "analogc/line_scheduler.hpp"

namespace testing_dag {

// Random block DAG over an AAIS: forward edges only, conflict-free blocks.
inline analogc::BlockSchedule random_block_schedule(std::mt19937_64& rng, const analogc::AAIS& aais, const analogc::ConflictGraph& graph,
                                                    std::size_t max_blocks = 16) {
    using namespace analogc;
    std::uniform_int_distribution<std::size_t> nblocks(0, max_blocks);
    std::uniform_int_distribution<std::size_t> pick(0, aais.instructions.size() - 1);
    std::uniform_int_distribution<int> width(0, 3);
    std::uniform_real_distribution<double> dur(0.05, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    double density = coin(rng) * 0.5;

    BlockSchedule bs;
    bs.globals.assign(aais.num_globals(), 0.0);
    for (std::size_t g = 0; g < bs.globals.size(); ++g) bs.globals[g] = 10.0 * static_cast<double>(g);
    std::size_t n = nblocks(rng);
    for (std::size_t b = 0; b < n; ++b) {
        Block block;
        block.duration = dur(rng);
        block.segment = 0;
        block.group = static_cast<std::uint32_t>(b);
        int w = width(rng);
        for (int k = 0; k < w; ++k) {
            auto id = static_cast<InstructionId>(pick(rng));
            bool ok = std::none_of(block.executions.begin(), block.executions.end(),
                                   [&](const Execution& e) { return e.instruction == id || graph.has_edge(e.instruction, id); });
            if (!ok) continue;
            block.executions.push_back({id, std::vector<double>(aais.instructions[id].num_locals(), coin(rng))});
        }
        bs.blocks.push_back(std::move(block));
        bs.successors.emplace_back();
    }
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
            if (coin(rng) < density) bs.successors[u].push_back(v);
    return bs;
}

// Independent property check; returns a description of the first violation.
inline std::string check_properties(const analogc::SignalLineSchedule& sls, const analogc::BlockSchedule& bs, const analogc::AAIS& aais) {
    using namespace analogc;
    const double tol = 1e-15;
    double max_end = 0.0;
    for (const auto& [line, execs] : sls.lines) {
        for (std::size_t i = 0; i < execs.size(); ++i) {
            const auto& a = execs[i];
            if (a.end_s < a.start_s) return "negative interval";
            max_end = std::max(max_end, a.end_s);
            if (a.start_s != sls.blocks.at(a.block).start_s) return "execution does not start with its block";
            for (std::size_t k = i + 1; k < execs.size(); ++k) {
                const auto& b = execs[k];
                bool empty = a.end_s == a.start_s || b.end_s == b.start_s;
                if (!empty && a.start_s < b.end_s - tol && b.start_s < a.end_s - tol) return "overlap on line " + std::to_string(line);
            }
        }
    }
    for (const auto& t : sls.blocks) max_end = std::max(max_end, t.end_s);
    if (std::abs(max_end - sls.total_duration_s) > tol) return "total duration is not the last end";
    for (std::uint32_t u = 0; u < bs.successors.size(); ++u)
        for (auto v : bs.successors[u])
            if (sls.blocks.at(v).start_s < sls.blocks.at(u).end_s) return "edge " + std::to_string(u) + "->" + std::to_string(v) + " violated";
    // Derived executions hold their sites exclusively.
    std::vector<std::pair<const TimedExecution*, const Instruction*>> all;
    for (const auto& [line, execs] : sls.lines)
        for (const auto& e : execs) all.emplace_back(&e, aais.find(e.instruction));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t k = i + 1; k < all.size(); ++k) {
            auto [ea, ia] = all[i];
            auto [eb, ib] = all[k];
            if (ia->nativeness != Nativeness::Derived && ib->nativeness != Nativeness::Derived) continue;
            if (ea->end_s == ea->start_s || eb->end_s == eb->start_s) continue;
            auto sa = ia->support(), sb = ib->support();
            bool share = std::any_of(sa.begin(), sa.end(), [&](SiteId s) { return std::find(sb.begin(), sb.end(), s) != sb.end(); });
            if (share && ea->start_s < eb->end_s - tol && eb->start_s < ea->end_s - tol) return "derived execution shares a busy site";
        }
    return "";
}

}  // namespace testing_dag
