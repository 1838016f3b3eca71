#include "analogc/conflict.hpp"
#include "analogc/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <numeric>

namespace analogc {

std::vector<std::vector<std::uint32_t>> BlockSchedule::predecessors() const {
    std::vector<std::vector<std::uint32_t>> pred(blocks.size());
    for (std::uint32_t b = 0; b < successors.size(); ++b)
        for (std::uint32_t s : successors[b]) pred[s].push_back(b);
    return pred;
}

std::size_t BlockSchedule::num_edges() const {
    std::size_t n = 0;
    for (const auto& s : successors) n += s.size();
    return n;
}

Groups group_executions(std::size_t count, const std::function<bool(std::size_t, std::size_t)>& conflicts) {
    std::vector<std::vector<std::size_t>> adj(count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j)
            if (conflicts(i, j)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });

    std::vector<int> color(count, -1);
    int num_colors = 0;
    for (std::size_t v : order) {
        std::vector<bool> taken(static_cast<std::size_t>(num_colors) + 1, false);
        for (std::size_t u : adj[v])
            if (color[u] >= 0) taken[static_cast<std::size_t>(color[u])] = true;
        int c = 0;
        while (taken[static_cast<std::size_t>(c)]) ++c;
        color[v] = c;
        num_colors = std::max(num_colors, c + 1);
    }
    Groups groups(static_cast<std::size_t>(num_colors));
    for (std::size_t v = 0; v < count; ++v) groups[static_cast<std::size_t>(color[v])].push_back(v);
    return groups;
}

Groups group_executions(const std::vector<Execution>& executions, const AAIS& aais) {
    return group_executions(executions.size(), [&](std::size_t a, std::size_t b) {
        return instructions_conflict(aais.instructions.at(executions[a].instruction), aais.instructions.at(executions[b].instruction));
    });
}

ConcreteHamiltonian execution_hamiltonian(const Execution& e, const AAIS& aais) {
    VarEnv env;
    env.locals = e.locals;
    return evaluate(aais.instructions.at(e.instruction).ham, env);
}

ConcreteHamiltonian system_hamiltonian(const AAIS& aais, const std::vector<double>& globals) {
    VarEnv env;
    env.globals = globals;
    return evaluate(aais.sys_ham, env);
}

CommutingSplit split_commuting(const std::vector<Execution>& executions, const AAIS& aais, const ConcreteHamiltonian& sys) {
    std::vector<ConcreteHamiltonian> hams;
    for (const auto& e : executions) hams.push_back(execution_hamiltonian(e, aais));
    std::vector<std::size_t> peeled;
    CommutingSplit split;
    for (std::size_t i = 0; i < executions.size(); ++i) {
        bool ok = commutes(hams[i], sys);
        for (std::size_t j = 0; ok && j < executions.size(); ++j)
            if (j != i) ok = commutes(hams[i], hams[j]);
        (ok ? peeled : split.rest).push_back(i);
    }
    std::vector<Execution> sub;
    for (std::size_t i : peeled) sub.push_back(executions[i]);
    for (auto& g : group_executions(sub, aais)) {
        for (auto& idx : g) idx = peeled[idx];
        split.standalone.push_back(std::move(g));
    }
    return split;
}

namespace {

// Restricts Hamiltonians to the sites they touch, renumbered from 0.
std::pair<std::vector<ConcreteHamiltonian>, std::size_t> compact_sites(const std::vector<ConcreteHamiltonian>& hams) {
    std::map<SiteId, SiteId> index;
    for (const auto& h : hams)
        for (SiteId s : h.support()) index.emplace(s, 0);
    SiteId next = 0;
    for (auto& [site, i] : index) i = next++;
    std::vector<ConcreteHamiltonian> out;
    for (const auto& h : hams) {
        ConcreteHamiltonian c;
        for (const auto& [p, coeff] : h.terms()) {
            std::vector<std::pair<SiteId, PauliOp>> f;
            for (auto [site, op] : p.factors()) f.emplace_back(index.at(site), op);
            c.add_term(PauliString(f), coeff);
        }
        out.push_back(std::move(c));
    }
    return {std::move(out), index.size()};
}

std::vector<std::size_t> dense_order(const std::vector<ConcreteHamiltonian>& groups, double step, std::uint32_t repetitions) {
    auto [local, n] = compact_sites(groups);
    std::vector<DenseOperator> factors;
    ConcreteHamiltonian total;
    for (const auto& h : local) {
        factors.push_back(hermitian_exp(to_dense(h, n), step));
        total += h;
    }
    DenseOperator exact = hermitian_exp(to_dense(total, n), step * repetitions);
    std::vector<std::size_t> order(groups.size()), best;
    std::iota(order.begin(), order.end(), 0);
    double best_dist = std::numeric_limits<double>::infinity();
    do {
        DenseOperator one = DenseOperator::identity(n);
        for (std::size_t g : order) one = multiply(factors[g], one);
        DenseOperator u = DenseOperator::identity(n);
        for (std::uint32_t r = 0; r < repetitions; ++r) u = multiply(one, u);
        double d = phase_aligned_distance(u, exact);
        if (best.empty() || d < best_dist - 1e-9) {
            best_dist = d;
            best = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

std::vector<std::size_t> commutator_order(const std::vector<ConcreteHamiltonian>& groups) {
    const std::size_t L = groups.size();
    // comm[a][b] = [H_b, H_a]: the first-order term when a is applied before b.
    std::vector<std::vector<ConcreteHamiltonian>> comm(L, std::vector<ConcreteHamiltonian>(L));
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = a + 1; b < L; ++b) {
            comm[a][b] = commutator(groups[b], groups[a]);
            comm[b][a] = -1.0 * comm[a][b];
        }
    std::vector<std::size_t> order(L), best;
    std::iota(order.begin(), order.end(), 0);
    double best_norm = std::numeric_limits<double>::infinity();
    do {
        ConcreteHamiltonian sum;
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = i + 1; j < L; ++j) sum += comm[order[i]][order[j]];
        double norm = coefficient_l1(sum, true);
        if (best.empty() || norm < best_norm - 1e-12 * std::max(1.0, best_norm)) {
            best_norm = norm;
            best = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace

std::vector<std::size_t> trotter_step_order(const std::vector<ConcreteHamiltonian>& groups, double step, std::uint32_t repetitions) {
    const std::size_t L = groups.size();
    if (L >= 2 && L <= kDenseOrderGroups) {
        std::set<SiteId> sites;
        for (const auto& h : groups)
            for (SiteId s : h.support()) sites.insert(s);
        if (sites.size() <= kDenseOrderSites) return dense_order(groups, step, repetitions);
    }
    if (L >= 3 && L <= kMaxOrderedGroups) return commutator_order(groups);
    std::vector<std::size_t> order(L);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

namespace {

struct SegmentPlan {
    Groups standalone;
    Groups trotter;
};

}  // namespace

BlockSchedule trotterize(const InstructionSchedule& sched, std::uint32_t repetitions, const AAIS& aais) {
    if (repetitions < 1) throw std::invalid_argument("trotterize: repetitions must be >= 1");
    ConcreteHamiltonian sys = system_hamiltonian(aais, sched.globals);
    bool has_sys = false;
    for (const auto& [p, c] : sys.terms())
        if (!p.is_identity()) has_sys = true;

    std::vector<SegmentPlan> plans;
    std::size_t widest = 0;
    for (const auto& seg : sched.segments) {
        SegmentPlan plan;
        CommutingSplit split = split_commuting(seg.executions, aais, sys);
        plan.standalone = std::move(split.standalone);
        std::vector<Execution> rest;
        for (std::size_t i : split.rest) rest.push_back(seg.executions[i]);
        for (auto g : group_executions(rest, aais)) {
            for (auto& idx : g) idx = split.rest[idx];
            plan.trotter.push_back(std::move(g));
        }
        widest = std::max(widest, std::max<std::size_t>(plan.standalone.size() + plan.trotter.size(), 1));
        plans.push_back(std::move(plan));
    }

    BlockSchedule out;
    out.globals = sched.globals;
    // With an always-on system Hamiltonian every block sees sys/L, so every
    // segment must cover exactly L block-durations of sys exposure.
    bool pad = has_sys && widest > 1;
    if (pad) {
        if (!aais.sys_scaling) throw TrotterError("AAIS '" + aais.name + "' has a system Hamiltonian but no scaling rule for " + std::to_string(widest) + " groups");
        out.globals = aais.sys_scaling(sched.globals, static_cast<double>(widest));
        for (auto& plan : plans) {
            std::size_t want = widest - plan.standalone.size();
            while (plan.trotter.size() < want) plan.trotter.emplace_back();
        }
    } else if (has_sys) {
        for (auto& plan : plans)
            if (plan.standalone.empty() && plan.trotter.empty()) plan.trotter.emplace_back();
    }

    std::vector<std::uint32_t> previous;
    auto emit_stage = [&](std::vector<Block> stage) {
        std::vector<std::uint32_t> ids;
        for (auto& b : stage) {
            auto id = static_cast<std::uint32_t>(out.blocks.size());
            out.blocks.push_back(std::move(b));
            out.successors.emplace_back();
            for (std::uint32_t p : previous) out.successors[p].push_back(id);
            ids.push_back(id);
        }
        if (!ids.empty()) previous = std::move(ids);
    };

    for (std::uint32_t j = 0; j < sched.segments.size(); ++j) {
        const auto& seg = sched.segments[j];
        const SegmentPlan& plan = plans[j];
        auto make_block = [&](const std::vector<std::size_t>& members, std::uint32_t group, std::uint32_t rep, double duration) {
            Block b;
            for (std::size_t i : members) b.executions.push_back(seg.executions[i]);
            b.duration = duration;
            b.segment = j;
            b.group = group;
            b.repetition = rep;
            return b;
        };
        std::vector<Block> stage;
        for (std::uint32_t g = 0; g < plan.standalone.size(); ++g) stage.push_back(make_block(plan.standalone[g], g, 0, seg.duration));
        emit_stage(std::move(stage));

        auto base = static_cast<std::uint32_t>(plan.standalone.size());
        std::size_t groups = plan.trotter.size();
        std::vector<std::size_t> step;
        if (groups > 1) {
            ConcreteHamiltonian step_sys = system_hamiltonian(aais, out.globals);
            std::vector<ConcreteHamiltonian> hams;
            for (const auto& members : plan.trotter) {
                ConcreteHamiltonian h = step_sys;
                for (std::size_t i : members) h += execution_hamiltonian(seg.executions[i], aais);
                hams.push_back(std::move(h));
            }
            step = trotter_step_order(hams, seg.duration / repetitions, repetitions);
        }
        out.trotter_groups.push_back(static_cast<std::uint32_t>(groups));
        if (groups == 1) {
            emit_stage({make_block(plan.trotter[0], base, 0, seg.duration)});
        } else if (groups > 1) {
            for (std::uint32_t r = 0; r < repetitions; ++r) {
                std::vector<Block> rep;
                for (std::size_t g : step) {
                    rep.push_back(make_block(plan.trotter[g], base + static_cast<std::uint32_t>(g), r, seg.duration / repetitions));
                    rep.back().trotterized = true;
                }
                emit_stage(std::move(rep));
            }
        }
    }
    return out;
}

double trotter_error_bound(double lambda, double T, double D, double R) {
    double x = lambda * T / (D * R);
    return lambda * T * x * std::exp(x);
}

}  // namespace analogc
