#pragma once

#include <cstdint>

namespace qsched {

// Simulation time in integer nanoseconds.
using Nanos = std::int64_t;

using NodeId = int;
using RequestId = std::uint64_t;

}  // namespace qsched
