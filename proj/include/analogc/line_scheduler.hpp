#pragma once

#include "analogc/schedule.hpp"

namespace analogc {

// Places blocks in topological order (lowest index first) at the earliest time
// that respects DAG edges, signal-line availability and site locks: a derived
// execution needs exclusive use of its sites, native executions share them.
SignalLineSchedule schedule(const BlockSchedule& bs, const AAIS& aais);

// Checks per-line disjointness and DAG respect; returns an empty string when valid.
std::string check_schedule(const SignalLineSchedule& sls, const BlockSchedule& bs);

}  // namespace analogc
