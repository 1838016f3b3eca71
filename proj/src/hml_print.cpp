#include <cmath>
#include <cstdio>

#include "analogc/hml.hpp"

namespace analogc::hml {

namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string monomial(const PauliString& p, const QuantumSystem& sys) {
    std::string s;
    for (const auto& [site, op] : p.factors()) {
        s += " * ";
        s += sys.site_names.at(site);
        s += '.';
        s += pauli_char(op);
    }
    return s;
}

}  // namespace

std::string print_system(const QuantumSystem& sys) {
    std::string out = "system " + sys.name + " {\n";
    for (const auto& r : sys.registers) out += "  sites " + r.name + "[" + std::to_string(r.size) + "];\n";
    for (const auto& seg : sys.segments) {
        out += "  evolve for " + number(seg.duration) + " under ";
        if (seg.ham.empty()) out += "0";
        bool first = true;
        for (const auto& [p, c] : seg.ham.terms()) {
            double v = c.real();
            if (first) {
                out += (v < 0 ? "-" : "");
            } else {
                out += (v < 0 ? " - " : " + ");
            }
            out += number(std::fabs(v)) + monomial(p, sys);
            first = false;
        }
        out += ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace analogc::hml
