#include <algorithm>
#include <set>

#include "analogc/synthesizer.hpp"

namespace analogc {

Layout Layout::identity(std::size_t n) {
    Layout l;
    for (std::size_t i = 0; i < n; ++i) l.mapping.push_back(static_cast<SiteId>(i));
    return l;
}

ConcreteHamiltonian map_hamiltonian(const Layout& layout, const ConcreteHamiltonian& h) {
    ConcreteHamiltonian out;
    for (const auto& [p, c] : h.terms()) {
        std::vector<PauliString::Factor> f;
        for (const auto& [site, op] : p.factors()) {
            if (site >= layout.mapping.size()) throw std::out_of_range("map_hamiltonian: site " + std::to_string(site) + " is not mapped");
            f.emplace_back(layout.mapping[site], op);
        }
        out.add_term(PauliString(std::move(f)), c);
    }
    return out;
}

LayoutProposer::LayoutProposer(const QuantumSystem& sys, const AAIS& aais, SearchBudget budget)
    : num_target_(sys.num_sites()), num_device_(aais.num_sites), budget_(budget) {
    std::set<PauliString> targets;
    std::vector<std::set<SiteId>> neighbors(num_target_);
    for (const auto& seg : sys.segments) {
        for (const auto& [p, c] : seg.ham.terms()) {
            if (p.is_identity()) continue;
            targets.insert(p);
            auto s = p.support();
            for (SiteId a : s)
                for (SiteId b : s)
                    if (a != b) neighbors[a].insert(b);
        }
    }
    targets_.assign(targets.begin(), targets.end());

    // Connected greedy order from site 0: next is the site with the most placed
    // neighbors, then the highest degree, then the lowest index. Keeping the order
    // connected lets the hole-match test prune early, and starting at site 0
    // tries the identity-like layouts of chain programs first.
    std::vector<bool> placed(num_target_, false);
    std::vector<std::size_t> placed_neighbors(num_target_, 0);
    for (std::size_t step = 0; step < num_target_; ++step) {
        SiteId pick = 0;
        bool have = false;
        for (SiteId v = 0; v < num_target_; ++v) {
            if (placed[v]) continue;
            if (!have || placed_neighbors[v] > placed_neighbors[pick] ||
                (placed_neighbors[v] == placed_neighbors[pick] && neighbors[v].size() > neighbors[pick].size())) {
                if (step == 0 && have) continue;
                pick = v;
                have = true;
            }
        }
        placed[pick] = true;
        order_.push_back(pick);
        for (SiteId w : neighbors[pick]) ++placed_neighbors[w];
    }

    std::set<PauliString> monos;
    for (const auto& ins : aais.instructions)
        for (const auto& [p, c] : ins.ham.terms())
            if (!p.is_identity()) monos.insert(p);
    for (const auto& [p, c] : aais.sys_ham.terms())
        if (!p.is_identity()) monos.insert(p);
    device_monos_.assign(monos.begin(), monos.end());
    device_adj_ = device_adjacency(aais);

    assign_.assign(num_target_, std::nullopt);
    used_.assign(num_device_, false);
    if (num_target_ > num_device_) done_ = true;
}

bool LayoutProposer::consistent() const {
    for (const auto& p : targets_) {
        bool matched = false;
        for (const auto& m : device_monos_) {
            if (m.weight() != p.weight()) continue;
            std::size_t assigned = 0;
            bool ok = true;
            for (const auto& [site, op] : p.factors()) {
                if (!assign_[site]) continue;
                ++assigned;
                if (m.at(*assign_[site]) != op) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            // Sites of m beyond the assigned images fill holes and must be free.
            std::size_t free_sites = 0;
            for (const auto& [site, op] : m.factors())
                if (!used_[site]) ++free_sites;
            if (free_sites + assigned == m.weight()) {
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

std::vector<SiteId> LayoutProposer::candidates_for_depth() const {
    std::vector<SiteId> adjacent, rest;
    for (SiteId d = 0; d < num_device_; ++d) {
        if (used_[d]) continue;
        bool adj = std::any_of(device_adj_[d].begin(), device_adj_[d].end(), [&](SiteId u) { return used_[u]; });
        (adj ? adjacent : rest).push_back(d);
    }
    adjacent.insert(adjacent.end(), rest.begin(), rest.end());
    return adjacent;
}

void LayoutProposer::push_frame() {
    stack_.push_back(Frame{stack_.size(), candidates_for_depth(), 0});
}

LayoutOutcome LayoutProposer::next() {
    auto snapshot = [&] {
        Layout l;
        l.mapping.resize(num_target_);
        for (std::size_t i = 0; i < num_target_; ++i) l.mapping[i] = *assign_[i];
        return l;
    };
    if (done_) return {SearchStatus::Exhausted, {}};
    if (!started_) {
        started_ = true;
        if (num_target_ == 0) {
            done_ = true;
            return {SearchStatus::Found, Layout{}};
        }
        if (!consistent()) {
            done_ = true;
            return {SearchStatus::Exhausted, {}};
        }
        push_frame();
    }
    while (!stack_.empty()) {
        Frame& f = stack_.back();
        SiteId target = order_[f.depth];
        if (assign_[target]) {
            used_[*assign_[target]] = false;
            assign_[target].reset();
        }
        if (f.next == f.candidates.size()) {
            stack_.pop_back();
            continue;
        }
        SiteId dev = f.candidates[f.next++];
        ++nodes_;
        bool out_of_time = budget_.deadline && (nodes_ & 255u) == 0 && std::chrono::steady_clock::now() > *budget_.deadline;
        if (nodes_ > budget_.max_nodes || out_of_time) {
            done_ = true;
            return {SearchStatus::Timeout, {}};
        }
        assign_[target] = dev;
        used_[dev] = true;
        if (!consistent()) continue;
        if (f.depth + 1 == num_target_) return {SearchStatus::Found, snapshot()};
        push_frame();
    }
    done_ = true;
    return {SearchStatus::Exhausted, {}};
}

}  // namespace analogc
