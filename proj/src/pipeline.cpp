#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <tuple>

#include "analogc/conflict.hpp"
#include "analogc/line_scheduler.hpp"
#include "analogc/pipeline.hpp"

namespace analogc {

const char* status_name(CompileStatus s) {
    switch (s) {
        case CompileStatus::Success: return "Success";
        case CompileStatus::NoSolution: return "NoSolution";
        case CompileStatus::Timeout: return "Timeout";
    }
    return "?";
}

double default_epsilon(const QuantumSystem& sys) {
    double total = 0.0;
    for (const auto& seg : sys.segments) total += seg.duration * coefficient_l1(seg.ham);
    return std::max(0.05 * total, 1e-9);
}

CompileResult compile(const QuantumSystem& sys, const AAIS& aais, const CompileOptions& opts) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(opts.timeout_s));

    CompileResult res;
    res.epsilon = opts.tolerance.value_or(default_epsilon(sys));
    if (sys.num_sites() > aais.num_sites) {
        res.message = "program has " + std::to_string(sys.num_sites()) + " sites but the machine has " + std::to_string(aais.num_sites);
        return res;
    }

    SolverOptions sopts;
    sopts.epsilon = res.epsilon;
    sopts.delta = opts.delta;
    sopts.max_iterations = opts.max_iterations;
    sopts.restarts = opts.restarts;
    sopts.rng_seed = opts.seed;
    sopts.deadline = deadline;

    std::optional<LayoutProposer> proposer;
    if (!opts.layout) proposer.emplace(sys, aais, SearchBudget{opts.max_nodes, deadline});
    bool solver_timed_out = false;

    while (res.layouts_tried < opts.max_layouts) {
        Layout layout;
        if (opts.layout) {
            if (res.layouts_tried > 0) break;
            layout = *opts.layout;
        } else {
            LayoutOutcome next = proposer->next();
            res.nodes_visited = proposer->nodes_visited();
            if (next.status == SearchStatus::Timeout) {
                res.status = CompileStatus::Timeout;
                res.message = "layout search ran out of budget after " + std::to_string(res.nodes_visited) + " nodes";
                return res;
            }
            if (next.status == SearchStatus::Exhausted) break;
            layout = std::move(next.layout);
        }
        ++res.layouts_tried;

        EquationSystem eqs = build_equations(layout, sys.segments, aais);
        SolveResult solved = solve(eqs, sopts);
        if (solved.status == SolveStatus::Timeout) {
            solver_timed_out = true;
            break;
        }
        if (solved.status != SolveStatus::Accepted) continue;

        res.layout = layout;
        res.solution = solved.solution;
        res.instructions = to_instruction_schedule(solved.solution, eqs);
        try {
            res.blocks = trotterize(res.instructions, opts.trotter, aais);
        } catch (const TrotterError& e) {
            res.message = e.what();
            return res;
        }
        res.lines = schedule(res.blocks, aais);
        res.metadata.epsilon = res.epsilon;
        res.metadata.delta = opts.delta;
        res.metadata.trotter = opts.trotter;
        res.metadata.discretization = std::max<std::uint32_t>(opts.discretization, 1);
        res.metadata.residual = solved.solution.e;
        res.metadata.layout = layout.mapping;
        res.metadata.seed = opts.seed;
        res.status = CompileStatus::Success;
        return res;
    }

    if (solver_timed_out) {
        res.status = CompileStatus::Timeout;
        res.message = "solver hit the time limit";
    } else if (res.layouts_tried == 0) {
        res.message = "no site layout of the program embeds into the machine";
    } else {
        res.message = "no accepted solution over " + std::to_string(res.layouts_tried) + " layout(s)";
    }
    return res;
}

BlockSchedule blocks_from_lines(const SignalLineSchedule& sls, const AAIS& aais) {
    BlockSchedule bs;
    bs.globals.resize(aais.num_globals());
    for (std::size_t g = 0; g < aais.num_globals(); ++g) {
        auto it = sls.globals.find(aais.global_names[g]);
        if (it == sls.globals.end()) throw ScheduleError("/globals/" + aais.global_names[g], "missing");
        bs.globals[g] = it->second;
    }
    for (const auto& [name, v] : sls.globals) {
        if (std::find(aais.global_names.begin(), aais.global_names.end(), name) == aais.global_names.end()) {
            throw ScheduleError("/globals/" + name, "not a global of " + aais.name);
        }
    }

    std::uint32_t count = 0;
    for (const auto& bt : sls.blocks) count = std::max(count, bt.block + 1);
    for (const auto& [line, execs] : sls.lines)
        for (const auto& te : execs) count = std::max(count, te.block + 1);
    bs.blocks.resize(count);
    bs.successors.resize(count);
    std::vector<bool> timed(count, false);
    for (const auto& bt : sls.blocks) {
        Block& b = bs.blocks[bt.block];
        b.duration = bt.nominal_duration;
        b.segment = bt.segment;
        b.group = bt.group;
        b.repetition = bt.repetition;
        b.trotterized = bt.trotterized;
        timed[bt.block] = true;
    }
    for (const auto& [line, execs] : sls.lines) {
        for (const auto& te : execs) {
            const Instruction* ins = aais.find(te.instruction);
            if (!ins) throw ScheduleError("/lines/" + std::to_string(line), "unknown instruction '" + te.instruction + "'");
            Execution e{ins->id, {}};
            for (const auto& local : ins->local_names) {
                auto it = te.params.find(local);
                if (it == te.params.end()) throw ScheduleError("/lines/" + std::to_string(line), te.instruction + " lacks parameter '" + local + "'");
                e.locals.push_back(it->second);
            }
            Block& b = bs.blocks[te.block];
            if (!timed[te.block]) b.duration = te.nominal_duration;
            b.executions.push_back(std::move(e));
        }
    }
    return bs;
}

namespace {

Layout relabeling(const std::vector<SiteId>& active, std::size_t device_sites) {
    Layout l;
    l.mapping.assign(device_sites, 0);
    for (std::size_t i = 0; i < active.size(); ++i) l.mapping[active[i]] = static_cast<SiteId>(i);
    return l;
}

}  // namespace

VerifyReport verify(const QuantumSystem& sys, const AAIS& aais, const PulseScheduleDoc& doc, const VerifyOptions& opts) {
    BlockSchedule bs = blocks_from_lines(doc.schedule, aais);
    Layout layout = doc.metadata.layout.empty() ? Layout::identity(sys.num_sites()) : Layout{doc.metadata.layout};
    if (layout.mapping.size() != sys.num_sites()) throw ScheduleError("/metadata/layout", "does not match the program's site count");
    for (SiteId s : layout.mapping)
        if (s >= aais.num_sites) throw ScheduleError("/metadata/layout", "site outside the machine");

    std::set<SiteId> active(layout.mapping.begin(), layout.mapping.end());
    std::vector<Segment> device_segments = schedule_segments(bs, aais);
    for (const auto& seg : device_segments)
        for (const auto& [p, c] : seg.ham.terms())
            for (SiteId s : p.support()) active.insert(s);
    if (active.size() > kMaxDenseSites) {
        throw SizeGuardError("verification needs " + std::to_string(active.size()) + " sites; the dense oracle stops at " + std::to_string(kMaxDenseSites));
    }
    std::vector<SiteId> order(active.begin(), active.end());
    Layout compact = relabeling(order, aais.num_sites);
    const std::size_t n = order.size();

    std::vector<Segment> target;
    for (const auto& seg : sys.segments) target.push_back(Segment{map_hamiltonian(compact, map_hamiltonian(layout, seg.ham)), seg.duration});
    for (auto& seg : device_segments) seg.ham = map_hamiltonian(compact, seg.ham);

    DenseOperator u_sched = evolve(device_segments, n);
    DenseOperator u_target = evolve(target, n);

    VerifyReport r;
    r.active_sites = n;
    r.residual = doc.metadata.residual;
    r.phase_distance = phase_aligned_distance(u_sched, u_target);
    r.tv = tv_distance(u_sched, u_target);
    // Lambda in target units: device amplitudes times the device-to-target time ratio.
    auto with_sys = trotter_segments(bs, aais, true);
    auto without_sys = trotter_segments(bs, aais, false);
    auto target_units = [&](const std::vector<TrotterSegment>& segs) {
        double lambda = 0.0;
        for (const auto& s : segs) {
            double tau = s.segment < sys.segments.size() ? sys.segments[s.segment].duration : 0.0;
            if (tau > 0.0) lambda = std::max(lambda, s.lambda * s.duration / tau);
        }
        return lambda;
    };
    r.lambda = target_units(with_sys);
    r.lambda_no_sys = target_units(without_sys);
    double R = std::max<double>(doc.metadata.trotter, 1);
    r.trotter = trotter_bound(with_sys, R);
    double T = sys.total_duration();

    BoundParams p;
    p.C1 = opts.C1;
    p.C2 = opts.C2;
    p.C3 = opts.C3;
    p.D = std::max<double>(doc.metadata.discretization, 1);
    if (doc.metadata.discretization > 1) std::tie(p.M, p.K) = discretization_constants(sys.segments);
    p.T = T;
    p.epsilon = doc.metadata.residual;
    p.R = R;
    p.S = static_cast<double>(doc.schedule.lines.size());
    p.Delta = opts.Delta;
    p.Gamma = 1.0;
    // p.Lambda stays 0: the Trotter term is the per-segment sum computed above.
    r.total_bound = error_bound(p) + r.trotter;
    return r;
}

std::string format_report(const VerifyReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "active sites      %zu\n"
                  "residual e        %.6g\n"
                  "phase distance    %.6g\n"
                  "tv distance       %.6g\n"
                  "lambda (with sys) %.6g\n"
                  "lambda (no sys)   %.6g\n"
                  "trotter bound     %.6g\n"
                  "total bound       %.6g\n",
                  r.active_sites, r.residual, r.phase_distance, r.tv, r.lambda, r.lambda_no_sys, r.trotter, r.total_bound);
    return buf;
}

}  // namespace analogc
