#include "qsched/engine.hpp"

#include "qsched/nettopo.hpp"
#include "qsched/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsched::engine {

using traffic::Request;
using traffic::RequestStatus;

void SlotConfig::validate() const {
    if (slot_interval <= 0 || max_exec <= 0) {
        throw std::invalid_argument("slot_interval and max_exec must be positive");
    }
    if (num_slots < 0) {
        throw std::invalid_argument("num_slots must be non-negative");
    }
    if (!(fidelity_threshold > 0.0 && fidelity_threshold < 1.0)) {
        throw std::invalid_argument("fidelity_threshold must lie in (0, 1)");
    }
}

AttemptStep apply_attempt(Request& request, const qlink::LinkSample& sample, const SlotConfig& cfg) {
    if (request.status != RequestStatus::Pending) {
        throw std::logic_error("attempt on a resolved request");
    }
    if (sample.duration <= 0) {
        throw std::invalid_argument("attempt duration must be positive");
    }
    ++request.attempts;
    if (request.exec_accum + sample.duration > cfg.max_exec) {
        const Nanos consumed = cfg.max_exec - request.exec_accum;
        request.exec_accum = cfg.max_exec;
        request.status = RequestStatus::Dropped;
        return {StepResult::Dropped, consumed};
    }
    request.exec_accum += sample.duration;
    if (sample.fidelity > cfg.fidelity_threshold) {
        request.status = RequestStatus::Completed;
        return {StepResult::Completed, sample.duration};
    }
    return {StepResult::Failed, sample.duration};
}

AttemptOutcome attempt_entanglement(Request& request, const qlink::LookupTable& lut, int hops,
                                    const SlotConfig& cfg, Rng& rng) {
    const auto& bucket = lut.at(hops);
    return attempt_with(request, [&] { return bucket[rng.uniform_index(bucket.size())]; }, cfg);
}

qlink::LinkSample draw_for_attempt(const Request& request, const qlink::LookupTable& lut, int hops,
                                   std::uint64_t attempt_seed) {
    Rng rng(derive_seed(attempt_seed, "attempt", request.id, static_cast<std::uint64_t>(request.attempts)));
    return lut.draw(hops, rng);
}

sched::SchedulerContext make_context(const nettopo::Topology& topology,
                                     const qlink::LookupTable& lut, const SlotConfig& cfg) {
    sched::SchedulerContext ctx;
    ctx.topology = &topology;
    ctx.mean_service_by_hop = qlink::mean_service_durations(lut, cfg.fidelity_threshold, cfg.max_exec);
    return ctx;
}

SlotStats run_slot(SlotEngineState& state, std::vector<Request> new_arrivals,
                   sched::Scheduler& scheduler, const nettopo::Topology& topology,
                   const qlink::LookupTable& lut, const SlotConfig& cfg,
                   sched::SchedulerContext& ctx, std::uint64_t attempt_seed) {
    const Nanos slot_start = state.slot_index * cfg.slot_interval;
    const Nanos slot_end = slot_start + cfg.slot_interval;
    state.clock = std::max(state.clock, slot_start);

    SlotStats stats;
    stats.slot_index = state.slot_index;
    stats.arrivals = new_arrivals.size();

    ctx.clock = state.clock;
    const sched::Order order = scheduler.order(new_arrivals, ctx);
    sched::check_permutation(order, new_arrivals.size());
    for (const std::size_t i : order) {
        state.carryover.push_back(std::move(new_arrivals[i]));
    }

    while (!state.carryover.empty() && state.clock < slot_end) {
        Request& head = state.carryover.front();
        if (head.service_start < 0) {
            head.service_start = state.clock;
        }
        const int hops = topology.hop_distance(head.src, head.dst);
        const qlink::LinkSample sample = draw_for_attempt(head, lut, hops, attempt_seed);
        const AttemptStep step = apply_attempt(head, sample, cfg);
        state.clock += step.consumed;
        if (step.result == StepResult::Failed) {
            continue;
        }
        head.t_end = state.clock;
        if (step.result == StepResult::Completed) {
            state.completed.push_back(std::move(head));
            ++stats.completed;
        } else {
            state.dropped.push_back(std::move(head));
            ++stats.dropped;
        }
        state.carryover.pop_front();
    }

    stats.queue_length = state.carryover.size();
    ++state.slot_index;
    return stats;
}

SimulationResult run_simulation(const SlotConfig& cfg, const nettopo::Topology& topology,
                                const qlink::LookupTable& lut, const traffic::Trace& trace,
                                sched::Scheduler& scheduler, std::uint64_t attempt_seed) {
    cfg.validate();
    lut.validate();
    if (static_cast<std::int64_t>(trace.slots.size()) < cfg.num_slots) {
        throw std::invalid_argument("trace covers fewer slots than the run");
    }
    if (topology.diameter() > lut.max_hops) {
        throw std::invalid_argument("lookup table covers " + std::to_string(lut.max_hops) +
                                    " hops but the topology diameter is " +
                                    std::to_string(topology.diameter()));
    }

    sched::SchedulerContext ctx = make_context(topology, lut, cfg);
    SlotEngineState state;
    SimulationResult result;
    result.slots.reserve(static_cast<std::size_t>(cfg.num_slots));
    for (std::int64_t s = 0; s < cfg.num_slots; ++s) {
        std::vector<Request> arrivals = trace.slots[static_cast<std::size_t>(s)];
        for (Request& r : arrivals) {
            r.t_gen = s * cfg.slot_interval;
        }
        result.arrivals += arrivals.size();
        result.slots.push_back(
            run_slot(state, std::move(arrivals), scheduler, topology, lut, cfg, ctx, attempt_seed));
    }
    result.completed = std::move(state.completed);
    result.dropped = std::move(state.dropped);
    result.unresolved.assign(std::make_move_iterator(state.carryover.begin()),
                             std::make_move_iterator(state.carryover.end()));
    return result;
}

SimulationResult run_simulation(const SlotConfig& cfg, const nettopo::Topology& topology,
                                const qlink::LookupTable& lut, const traffic::ArrivalModel& arrivals,
                                sched::Scheduler& scheduler, std::uint64_t attempt_seed) {
    const traffic::Trace trace =
        traffic::generate_trace(arrivals, topology.node_count(), cfg.num_slots, cfg.slot_interval);
    return run_simulation(cfg, topology, lut, trace, scheduler, attempt_seed);
}

void write_requests_jsonl(const SimulationResult& result, std::ostream& out) {
    std::vector<const Request*> all;
    for (const auto* group : {&result.completed, &result.dropped, &result.unresolved}) {
        for (const Request& r : *group) {
            all.push_back(&r);
        }
    }
    std::sort(all.begin(), all.end(), [](const Request* a, const Request* b) { return a->id < b->id; });
    for (const Request* r : all) {
        nlohmann::json rec = {
            {"id", r->id},
            {"src", r->src},
            {"dst", r->dst},
            {"t_gen", r->t_gen},
        };
        switch (r->status) {
            case RequestStatus::Completed:
                rec["status"] = "completed";
                rec["t_f"] = r->t_end;
                break;
            case RequestStatus::Dropped:
                rec["status"] = "dropped";
                rec["t_drop"] = r->t_end;
                break;
            case RequestStatus::Pending:
                rec["status"] = "unresolved";
                break;
        }
        rec["exec_accum"] = r->exec_accum;
        rec["attempts"] = r->attempts;
        out << rec.dump() << '\n';
    }
}

}  // namespace qsched::engine
