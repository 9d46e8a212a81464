#pragma once

#include "qsched/common.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace qsched::traffic {

enum class RequestStatus { Pending, Completed, Dropped };

const char* to_string(RequestStatus status);

// One entanglement demand between two distinct nodes.
struct Request {
    RequestId id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    std::int64_t slot_index = 0;
    Nanos t_gen = 0;       // slot start of the arrival slot
    Nanos exec_accum = 0;  // attempt time consumed so far
    int attempts = 0;
    RequestStatus status = RequestStatus::Pending;
    Nanos t_end = 0;          // completion or drop time, when resolved
    Nanos service_start = -1; // clock at first attempt; -1 until served

    Nanos delay() const { return t_end - t_gen; }
    bool operator==(const Request&) const = default;
};

// Per-slot arrival count ~ U{low, ..., high}.
struct ArrivalModel {
    int low = 0;
    int high = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

// Draws the slot's arrivals. Ids run from first_id upward. The result
// depends only on (model.seed, slot_index) apart from the ids and stamps.
std::vector<Request> arrivals_for_slot(const ArrivalModel& model, int node_count,
                                       std::int64_t slot_index, Nanos slot_start,
                                       RequestId first_id);

// Arrivals of a whole run, grouped by slot. Ids are consecutive from 0.
struct Trace {
    std::vector<std::vector<Request>> slots;

    std::size_t request_count() const;
    // FNV-1a over (id, slot, src, dst); equal traces hash equal.
    std::uint64_t hash() const;
};

Trace generate_trace(const ArrivalModel& model, int node_count, std::int64_t num_slots,
                     Nanos slot_interval);

// CSV with header "id,slot_index,src,dst".
void write_trace_csv(const Trace& trace, std::ostream& out);
void save_trace(const Trace& trace, const std::filesystem::path& path);
// t_gen is restored as slot_index * slot_interval.
Trace read_trace_csv(std::istream& in, std::int64_t num_slots, Nanos slot_interval);
Trace load_trace(const std::filesystem::path& path, std::int64_t num_slots, Nanos slot_interval);

}  // namespace qsched::traffic
