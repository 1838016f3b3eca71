#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "analogc/hamiltonian.hpp"

namespace analogc {

struct Segment {
    ConcreteHamiltonian ham;
    double duration = 0.0;

    bool operator==(const Segment&) const = default;
};

struct SiteRegister {
    std::string name;
    std::uint32_t size = 0;
    SiteId first = 0;

    bool operator==(const SiteRegister&) const = default;
};

struct QuantumSystem {
    std::string name;
    std::vector<SiteRegister> registers;
    std::vector<std::string> site_names;  // "q[0]" style, indexed by site id
    std::vector<Segment> segments;

    std::size_t num_sites() const { return site_names.size(); }
    double total_duration() const;
    bool operator==(const QuantumSystem&) const = default;
};

// H(t) with t bound to local variable 0, sampled on [0, duration).
struct TimeDependentSegment {
    ParamHamiltonian ham;
    double duration = 0.0;
    std::uint32_t steps = 1;
};

std::vector<Segment> discretize(const TimeDependentSegment& seg);

// C1 * M * K * T^2 / D
double discretization_bound(double D, double M, double K, double T, double C1);

namespace hml {

class SourceError : public std::runtime_error {
public:
    SourceError(std::string message, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    int line_;
    int column_;
};

struct ParseOptions {
    // Replaces the step count of every "steps" clause when set.
    std::optional<std::uint32_t> steps_override;
};

QuantumSystem parse_system(std::string_view text, const ParseOptions& options = {});
QuantumSystem parse_system_file(const std::string& path, const ParseOptions& options = {});

// Largest step count among time-dependent clauses after overrides; 0 when none.
std::uint32_t max_steps(std::string_view text, const ParseOptions& options = {});

// Prints a system back in HML; parse_system(print_system(s)) == s.
std::string print_system(const QuantumSystem& sys);

}  // namespace hml
}  // namespace analogc
