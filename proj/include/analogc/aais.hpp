#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "analogc/hamiltonian.hpp"

namespace analogc {

using InstructionId = std::uint32_t;
using LineId = std::uint32_t;
using Edge = std::pair<SiteId, SiteId>;

enum class Nativeness { Native, Derived };

// Implementation time in seconds for a nominal duration tau: base + slope*tau, floored at 0.
struct DurationModel {
    double base_seconds = 0.0;
    double slope_seconds = 0.0;

    double seconds(double nominal) const;
    bool operator==(const DurationModel&) const = default;
};

// Duration families addressable from a machine config.
inline constexpr const char* kFamily1Site = "eta_1site";
inline constexpr const char* kFamily2Site = "eta_2site";
inline constexpr const char* kFamilyGlobal = "eta_global";
inline constexpr const char* kFamilyIdle = "idle";

struct Instruction {
    InstructionId id = 0;
    std::string name;
    std::vector<std::string> local_names;
    ParamHamiltonian ham;
    LineId signal_line = 0;
    Nativeness nativeness = Nativeness::Native;
    DurationModel duration;
    std::string family;

    std::size_t num_locals() const { return local_names.size(); }
    std::vector<SiteId> support() const { return ham.support(); }
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AAIS {
    std::string name;
    std::size_t num_sites = 0;
    std::vector<Instruction> instructions;
    std::vector<std::string> global_names;
    ParamHamiltonian sys_ham;
    // Maps (g, L) to g' with sys_ham(g') = sys_ham(g) / L. Empty when the AAIS has no rule.
    std::function<std::vector<double>(std::span<const double>, double)> sys_scaling;
    // Suggested starting values for the globals.
    std::vector<double> global_seed;
    // Pairs of globals whose difference must stay at least min_separation apart.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> separated_globals;
    double min_separation = 1e-3;
    DurationModel idle;

    std::size_t num_globals() const { return global_names.size(); }
    const Instruction* find(const std::string& instruction_name) const;
    // Throws ConfigError on a broken invariant.
    void validate() const;
};

// Both instructions touch a common line, or one is derived and supports overlap.
bool instructions_conflict(const Instruction& a, const Instruction& b);

struct ConflictGraph {
    std::vector<std::vector<InstructionId>> adjacency;
    bool has_edge(InstructionId a, InstructionId b) const;
};

ConflictGraph conflict_graph(const AAIS& aais);

// Device connectivity: sites u, v adjacent when some instruction or sys_ham monomial touches both.
std::vector<std::vector<SiteId>> device_adjacency(const AAIS& aais);

struct IbmConstants {
    double omega_zx = 1.0;
    double omega_zz = 0.05;
    double omega_ix = 0.3;
    double omega_zi = 0.02;
};

AAIS build_ideal_rydberg(std::size_t n, double c6);
AAIS build_global_rydberg(std::size_t n, double c6);
AAIS build_heisenberg(std::size_t n, const std::vector<Edge>& edges);
AAIS build_two_pauli(std::size_t n, const std::vector<Edge>& edges);
AAIS build_ibm_native(std::size_t n, const std::vector<Edge>& edges, const IbmConstants& omega);

struct MachineConfig {
    std::string aais;
    std::size_t num_sites = 0;
    std::vector<Edge> connectivity;
    std::map<std::string, double> constants;
    std::map<std::string, DurationModel> durations;
    std::map<std::string, LineId> signal_lines;  // instruction name -> line override
};

MachineConfig parse_machine_config(const std::string& json_text);
MachineConfig load_machine_config_file(const std::string& path);
AAIS build_machine(const MachineConfig& config);

std::vector<std::string> builtin_aais_names();

}  // namespace analogc
