#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "analogc/schedule.hpp"

namespace analogc {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "analogc 0.1.0";

struct CompileMetadata {
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint32_t trotter = 1;
    std::uint32_t discretization = 1;
    double residual = 0.0;
    std::vector<SiteId> layout;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;

    bool operator==(const CompileMetadata&) const = default;
};

struct PulseScheduleDoc {
    SignalLineSchedule schedule;
    CompileMetadata metadata;

    bool operator==(const PulseScheduleDoc&) const = default;
};

class ScheduleError : public std::runtime_error {
public:
    ScheduleError(const std::string& pointer, const std::string& message)
        : std::runtime_error(pointer + ": " + message), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

// Canonical JSON: sorted keys, numbers with 17 significant digits, trailing newline.
std::string emit_json(const SignalLineSchedule& sls, const CompileMetadata& meta);

PulseScheduleDoc parse_schedule_document(const std::string& bytes);
SignalLineSchedule parse_schedule(const std::string& bytes);

// Plain-text summary of a schedule for terminals.
std::string schedule_report(const SignalLineSchedule& sls);

}  // namespace analogc
