#pragma once

#include "qsched/common.hpp"
#include "qsched/qlink/lookup_table.hpp"
#include "qsched/sched.hpp"
#include "qsched/traffic.hpp"

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <vector>

namespace qsched::nettopo {
class Topology;
}

namespace qsched::engine {

// Reference setting: 10,000 slots, 100,000 ns execution budget, success
// strictly above fidelity 0.5. The slot interval sets the load
// (2e5 ns medium, 5e5 ns low).
struct SlotConfig {
    Nanos slot_interval = 200'000;
    Nanos max_exec = 100'000;
    std::int64_t num_slots = 10'000;
    double fidelity_threshold = 0.5;

    void validate() const;
};

enum class StepResult { Failed, Completed, Dropped };

struct AttemptStep {
    StepResult result = StepResult::Failed;
    Nanos consumed = 0;  // clock time charged for this attempt
};

// Charges one drawn attempt to the request. An attempt that would push
// exec_accum past max_exec drops the request and is charged only up to the
// budget, whatever its fidelity.
AttemptStep apply_attempt(traffic::Request& request, const qlink::LinkSample& sample,
                          const SlotConfig& cfg);

enum class AttemptResult { Completed, Dropped };

struct AttemptOutcome {
    AttemptResult result = AttemptResult::Completed;
    Nanos total = 0;  // completion time or consumed budget
    int attempts = 0;
};

// Retries until success or drop. `draw` yields one LinkSample per call.
// Resumable: starts from whatever exec_accum the request already holds.
template <class Draw>
AttemptOutcome attempt_with(traffic::Request& request, Draw&& draw, const SlotConfig& cfg) {
    while (true) {
        const AttemptStep step = apply_attempt(request, draw(), cfg);
        if (step.result == StepResult::Completed) {
            return {AttemptResult::Completed, request.exec_accum, request.attempts};
        }
        if (step.result == StepResult::Dropped) {
            return {AttemptResult::Dropped, request.exec_accum, request.attempts};
        }
    }
}

AttemptOutcome attempt_entanglement(traffic::Request& request, const qlink::LookupTable& lut,
                                    int hops, const SlotConfig& cfg, Rng& rng);

// Draw stream of one request: attempt n of request id uses its own
// sub-seed, so any scheduler replaying a trace sees the same draws.
qlink::LinkSample draw_for_attempt(const traffic::Request& request, const qlink::LookupTable& lut,
                                   int hops, std::uint64_t attempt_seed);

struct SlotStats {
    std::int64_t slot_index = 0;
    std::size_t arrivals = 0;
    std::size_t completed = 0;  // resolved during this slot
    std::size_t dropped = 0;
    std::size_t queue_length = 0;  // carried into the next slot

    bool operator==(const SlotStats&) const = default;
};

struct SlotEngineState {
    // May run past the slot boundary by at most one attempt (attempts are
    // atomic); the next slot starts at max(clock, slot start).
    Nanos clock = 0;
    std::int64_t slot_index = 0;
    std::deque<traffic::Request> carryover;  // head = served first
    std::vector<traffic::Request> completed;
    std::vector<traffic::Request> dropped;
};

sched::SchedulerContext make_context(const nettopo::Topology& topology,
                                     const qlink::LookupTable& lut, const SlotConfig& cfg);

// One slot: carried-over requests first in their existing order, then the
// new arrivals in the order the scheduler returns. Requests are served one
// at a time until the clock reaches the slot boundary.
SlotStats run_slot(SlotEngineState& state, std::vector<traffic::Request> new_arrivals,
                   sched::Scheduler& scheduler, const nettopo::Topology& topology,
                   const qlink::LookupTable& lut, const SlotConfig& cfg,
                   sched::SchedulerContext& ctx, std::uint64_t attempt_seed);

struct SimulationResult {
    std::vector<traffic::Request> completed;
    std::vector<traffic::Request> dropped;
    std::vector<traffic::Request> unresolved;  // still queued after the last slot
    std::vector<SlotStats> slots;
    std::size_t arrivals = 0;

    bool operator==(const SimulationResult&) const = default;
};

SimulationResult run_simulation(const SlotConfig& cfg, const nettopo::Topology& topology,
                                const qlink::LookupTable& lut, const traffic::Trace& trace,
                                sched::Scheduler& scheduler, std::uint64_t attempt_seed);

SimulationResult run_simulation(const SlotConfig& cfg, const nettopo::Topology& topology,
                                const qlink::LookupTable& lut, const traffic::ArrivalModel& arrivals,
                                sched::Scheduler& scheduler, std::uint64_t attempt_seed);

// One JSON object per request:
// {id, src, dst, t_gen, status, t_f | t_drop, exec_accum, attempts}.
// Unresolved requests are written with status "unresolved".
void write_requests_jsonl(const SimulationResult& result, std::ostream& out);

}  // namespace qsched::engine
