#include <algorithm>
#include <cmath>
#include <map>

#include "analogc/conflict.hpp"
#include "analogc/verifier.hpp"

namespace analogc {

std::vector<Segment> schedule_segments(const InstructionSchedule& sched, const AAIS& aais) {
    ConcreteHamiltonian sys = system_hamiltonian(aais, sched.globals);
    std::vector<Segment> out;
    for (const auto& seg : sched.segments) {
        ConcreteHamiltonian h = sys;
        for (const auto& e : seg.executions) h += execution_hamiltonian(e, aais);
        out.push_back(Segment{std::move(h), seg.duration});
    }
    return out;
}

std::vector<Segment> schedule_segments(const BlockSchedule& sched, const AAIS& aais) {
    ConcreteHamiltonian sys = system_hamiltonian(aais, sched.globals);
    std::vector<Segment> out;
    for (const auto& block : sched.blocks) {
        ConcreteHamiltonian h = sys;
        for (const auto& e : block.executions) h += execution_hamiltonian(e, aais);
        out.push_back(Segment{std::move(h), block.duration});
    }
    return out;
}

DenseOperator schedule_unitary(const InstructionSchedule& sched, const AAIS& aais, std::size_t n) {
    return evolve(schedule_segments(sched, aais), n);
}

DenseOperator schedule_unitary(const BlockSchedule& sched, const AAIS& aais, std::size_t n) {
    return evolve(schedule_segments(sched, aais), n);
}

double error_bound(const BoundParams& p) {
    double discretization = p.C1 * p.M * p.K * p.T * p.T / p.D;
    double synthesis = p.C2 * p.epsilon;
    double trotter = trotter_error_bound(p.Lambda, p.T, p.D, p.R);
    double pulses = p.C3 * p.S * p.Delta * p.Gamma * p.T;
    return discretization + synthesis + trotter + pulses;
}

std::vector<TrotterSegment> trotter_segments(const BlockSchedule& sched, const AAIS& aais, bool include_sys) {
    ConcreteHamiltonian sys = include_sys ? system_hamiltonian(aais, sched.globals) : ConcreteHamiltonian{};
    auto norm = [&](const ConcreteHamiltonian& h) {
        std::vector<SiteId> support = h.support();
        if (support.size() > kMaxDenseSites) return coefficient_l1(h, true);
        std::map<SiteId, SiteId> compact;
        for (SiteId s : support) compact.emplace(s, static_cast<SiteId>(compact.size()));
        ConcreteHamiltonian local;
        for (const auto& [p, c] : h.terms()) {
            std::vector<std::pair<SiteId, PauliOp>> f;
            for (auto [site, op] : p.factors()) f.emplace_back(compact.at(site), op);
            local.add_term(PauliString(f), c);
        }
        return spectral_norm(to_dense(local, support.size()));
    };
    // segment -> group -> operator norm of the group's Hamiltonian
    std::map<std::uint32_t, std::map<std::uint32_t, double>> groups;
    std::map<std::uint32_t, double> durations;
    for (const auto& block : sched.blocks) {
        if (!block.trotterized) continue;
        if (block.repetition != 0) continue;
        durations[block.segment] = block.duration;
        ConcreteHamiltonian h = sys;
        for (const auto& e : block.executions) h += execution_hamiltonian(e, aais);
        groups[block.segment][block.group] = norm(h);
    }
    std::map<std::uint32_t, std::uint32_t> reps;
    for (const auto& block : sched.blocks)
        if (block.trotterized) reps[block.segment] = std::max(reps[block.segment], block.repetition + 1);
    std::vector<TrotterSegment> out;
    for (const auto& [seg, norms] : groups) {
        double widest = 0.0;
        for (const auto& [g, v] : norms) widest = std::max(widest, v);
        out.push_back({seg, static_cast<double>(norms.size()) * widest, durations[seg] * reps[seg]});
    }
    return out;
}

double trotter_lambda(const BlockSchedule& sched, const AAIS& aais, bool include_sys) {
    double lambda = 0.0;
    for (const auto& s : trotter_segments(sched, aais, include_sys)) lambda = std::max(lambda, s.lambda);
    return lambda;
}

double trotter_bound(const std::vector<TrotterSegment>& segments, double repetitions) {
    double total = 0.0;
    for (const auto& s : segments) total += trotter_error_bound(s.lambda, s.duration, 1.0, repetitions);
    return total;
}

std::pair<double, double> discretization_constants(const std::vector<Segment>& segments) {
    double m = 0.0, k = 0.0;
    for (std::size_t d = 0; d < segments.size(); ++d) {
        m = std::max(m, coefficient_l1(segments[d].ham));
        if (d + 1 < segments.size() && segments[d].duration > 0.0) {
            k = std::max(k, coefficient_l1(segments[d + 1].ham - segments[d].ham) / segments[d].duration);
        }
    }
    return {m, k};
}

}  // namespace analogc
