#include "analogc/line_scheduler.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace analogc {

SignalLineSchedule schedule(const BlockSchedule& bs, const AAIS& aais) {
    const std::size_t nb = bs.blocks.size();
    auto pred = bs.predecessors();
    std::vector<std::size_t> indegree(nb);
    for (std::size_t b = 0; b < nb; ++b) indegree[b] = pred[b].size();
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
    for (std::uint32_t b = 0; b < nb; ++b)
        if (indegree[b] == 0) ready.push(b);

    SignalLineSchedule out;
    out.aais = aais.name;
    for (std::size_t g = 0; g < bs.globals.size() && g < aais.num_globals(); ++g) out.globals[aais.global_names[g]] = bs.globals[g];
    out.blocks.resize(nb);

    std::map<LineId, double> line_free;
    std::vector<double> site_any(aais.num_sites, 0.0), site_derived(aais.num_sites, 0.0);
    std::size_t placed = 0;

    while (!ready.empty()) {
        std::uint32_t b = ready.top();
        ready.pop();
        ++placed;
        const Block& block = bs.blocks[b];

        double start = 0.0;
        for (std::uint32_t p : pred[b]) start = std::max(start, out.blocks[p].end_s);
        std::vector<std::vector<SiteId>> supports;
        for (const auto& e : block.executions) {
            const Instruction& ins = aais.instructions.at(e.instruction);
            if (auto it = line_free.find(ins.signal_line); it != line_free.end()) start = std::max(start, it->second);
            supports.push_back(ins.support());
            const auto& lock = ins.nativeness == Nativeness::Derived ? site_any : site_derived;
            for (SiteId s : supports.back()) start = std::max(start, lock[s]);
        }

        double end = start;
        if (block.executions.empty()) end = start + aais.idle.seconds(block.duration);
        for (std::size_t i = 0; i < block.executions.size(); ++i) {
            const Execution& e = block.executions[i];
            const Instruction& ins = aais.instructions.at(e.instruction);
            TimedExecution te;
            te.instruction = ins.name;
            for (std::size_t l = 0; l < ins.num_locals() && l < e.locals.size(); ++l) te.params[ins.local_names[l]] = e.locals[l];
            te.start_s = start;
            te.end_s = start + ins.duration.seconds(block.duration);
            te.nominal_duration = block.duration;
            te.block = b;
            end = std::max(end, te.end_s);
            out.lines[ins.signal_line].push_back(std::move(te));
        }
        for (std::size_t i = 0; i < block.executions.size(); ++i) {
            const Instruction& ins = aais.instructions.at(block.executions[i].instruction);
            line_free[ins.signal_line] = end;
            for (SiteId s : supports[i]) {
                site_any[s] = std::max(site_any[s], end);
                if (ins.nativeness == Nativeness::Derived) site_derived[s] = std::max(site_derived[s], end);
            }
        }
        out.blocks[b] = BlockTiming{b, block.segment, block.group, block.repetition, block.duration, start, end, block.trotterized};
        out.total_duration_s = std::max(out.total_duration_s, end);

        for (std::uint32_t s : bs.successors[b])
            if (--indegree[s] == 0) ready.push(s);
    }
    if (placed != nb) throw std::invalid_argument("schedule: block graph has a cycle");
    return out;
}

std::string check_schedule(const SignalLineSchedule& sls, const BlockSchedule& bs) {
    for (const auto& [line, execs] : sls.lines) {
        std::vector<std::pair<double, double>> iv;
        for (const auto& e : execs) {
            if (e.end_s < e.start_s) return "line " + std::to_string(line) + ": execution ends before it starts";
            if (e.end_s > e.start_s) iv.emplace_back(e.start_s, e.end_s);
        }
        std::sort(iv.begin(), iv.end());
        for (std::size_t i = 1; i < iv.size(); ++i)
            if (iv[i].first < iv[i - 1].second) return "line " + std::to_string(line) + ": overlapping executions";
    }
    for (std::uint32_t b = 0; b < bs.successors.size(); ++b)
        for (std::uint32_t s : bs.successors[b])
            if (sls.blocks.at(s).start_s < sls.blocks.at(b).end_s) return "edge " + std::to_string(b) + "->" + std::to_string(s) + " violated";
    return "";
}

}  // namespace analogc
