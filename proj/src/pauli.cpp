#include "analogc/pauli.hpp"

#include <algorithm>
#include <stdexcept>

namespace analogc {

char pauli_char(PauliOp op) {
    static constexpr char chars[] = {'I', 'X', 'Y', 'Z'};
    return chars[static_cast<int>(op)];
}

Complex Phase::value() const {
    switch (quarter_turns & 3u) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

OpProduct pauli_mul(PauliOp a, PauliOp b) {
    if (a == PauliOp::I) return {Phase{0}, b};
    if (b == PauliOp::I) return {Phase{0}, a};
    if (a == b) return {Phase{0}, PauliOp::I};
    // X,Y,Z are 1,2,3: cyclic order XY=iZ, YZ=iX, ZX=iY.
    int ia = static_cast<int>(a), ib = static_cast<int>(b);
    auto third = static_cast<PauliOp>(6 - ia - ib);
    bool cyclic = (ib - ia + 3) % 3 == 1;
    return {Phase{static_cast<std::uint8_t>(cyclic ? 1 : 3)}, third};
}

PauliString::PauliString(std::vector<Factor> factors) {
    std::erase_if(factors, [](const Factor& f) { return f.second == PauliOp::I; });
    std::sort(factors.begin(), factors.end());
    for (std::size_t i = 1; i < factors.size(); ++i) {
        if (factors[i].first == factors[i - 1].first) {
            throw std::invalid_argument("PauliString: site " + std::to_string(factors[i].first) + " repeated");
        }
    }
    factors_ = std::move(factors);
}

PauliString PauliString::single(SiteId site, PauliOp op) {
    return PauliString({{site, op}});
}

PauliString PauliString::parse(std::string_view tag) {
    std::vector<Factor> out;
    if (tag.empty() || tag == "I") return PauliString{};
    std::size_t i = 0;
    while (i < tag.size()) {
        PauliOp op;
        switch (tag[i]) {
            case 'I': op = PauliOp::I; break;
            case 'X': op = PauliOp::X; break;
            case 'Y': op = PauliOp::Y; break;
            case 'Z': op = PauliOp::Z; break;
            default: throw std::invalid_argument("PauliString::parse: bad operator in '" + std::string(tag) + "'");
        }
        ++i;
        std::size_t start = i;
        SiteId site = 0;
        while (i < tag.size() && tag[i] >= '0' && tag[i] <= '9') site = site * 10 + static_cast<SiteId>(tag[i++] - '0');
        if (i == start) throw std::invalid_argument("PauliString::parse: missing site in '" + std::string(tag) + "'");
        out.emplace_back(site, op);
    }
    return PauliString(std::move(out));
}

PauliOp PauliString::at(SiteId site) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{site, PauliOp::I});
    if (it != factors_.end() && it->first == site) return it->second;
    return PauliOp::I;
}

std::vector<SiteId> PauliString::support() const {
    std::vector<SiteId> s;
    s.reserve(factors_.size());
    for (const auto& f : factors_) s.push_back(f.first);
    return s;
}

SiteId PauliString::max_site() const {
    return factors_.empty() ? 0 : factors_.back().first;
}

std::string PauliString::str() const {
    if (factors_.empty()) return "I";
    std::string s;
    for (const auto& [site, op] : factors_) {
        s += pauli_char(op);
        s += std::to_string(site);
    }
    return s;
}

StringProduct string_mul(const PauliString& p, const PauliString& q) {
    auto a = p.factors(), b = q.factors();
    std::vector<PauliString::Factor> out;
    out.reserve(a.size() + b.size());
    Phase phase;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            auto prod = pauli_mul(a[i].second, b[j].second);
            phase = phase * prod.phase;
            if (prod.op != PauliOp::I) out.emplace_back(a[i].first, prod.op);
            ++i;
            ++j;
        }
    }
    return {phase, PauliString(std::move(out))};
}

bool anticommute(const PauliString& p, const PauliString& q) {
    auto a = p.factors(), b = q.factors();
    std::size_t i = 0, j = 0;
    bool odd = false;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            if (a[i].second != b[j].second) odd = !odd;
            ++i;
            ++j;
        }
    }
    return odd;
}

}  // namespace analogc
