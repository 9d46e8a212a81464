#include "qsched/traffic.hpp"

#include "qsched/rng.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qsched::traffic {

const char* to_string(RequestStatus status) {
    switch (status) {
        case RequestStatus::Pending:
            return "pending";
        case RequestStatus::Completed:
            return "completed";
        case RequestStatus::Dropped:
            return "dropped";
    }
    return "unknown";
}

void ArrivalModel::validate() const {
    if (low < 0 || high < low) {
        throw std::invalid_argument("arrival bounds must satisfy 0 <= low <= high");
    }
}

std::vector<Request> arrivals_for_slot(const ArrivalModel& model, int node_count,
                                       std::int64_t slot_index, Nanos slot_start,
                                       RequestId first_id) {
    model.validate();
    if (node_count < 2) {
        throw std::invalid_argument("need at least two nodes to form a request");
    }
    Rng rng(derive_seed(model.seed, "arrivals", static_cast<std::uint64_t>(slot_index)));
    const auto count = rng.uniform_int(model.low, model.high);
    std::vector<Request> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        Request r;
        r.id = first_id + static_cast<RequestId>(i);
        r.src = static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(node_count)));
        auto d = static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(node_count - 1)));
        r.dst = d >= r.src ? d + 1 : d;
        r.slot_index = slot_index;
        r.t_gen = slot_start;
        out.push_back(r);
    }
    return out;
}

std::size_t Trace::request_count() const {
    std::size_t n = 0;
    for (const auto& s : slots) {
        n += s.size();
    }
    return n;
}

std::uint64_t Trace::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& slot : slots) {
        for (const Request& r : slot) {
            mix(r.id);
            mix(static_cast<std::uint64_t>(r.slot_index));
            mix(static_cast<std::uint64_t>(r.src));
            mix(static_cast<std::uint64_t>(r.dst));
        }
    }
    return h;
}

Trace generate_trace(const ArrivalModel& model, int node_count, std::int64_t num_slots,
                     Nanos slot_interval) {
    Trace trace;
    trace.slots.reserve(static_cast<std::size_t>(num_slots));
    RequestId next_id = 0;
    for (std::int64_t s = 0; s < num_slots; ++s) {
        trace.slots.push_back(arrivals_for_slot(model, node_count, s, s * slot_interval, next_id));
        next_id += trace.slots.back().size();
    }
    return trace;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "id,slot_index,src,dst\n";
    for (const auto& slot : trace.slots) {
        for (const Request& r : slot) {
            out << r.id << ',' << r.slot_index << ',' << r.src << ',' << r.dst << '\n';
        }
    }
}

void save_trace(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_trace_csv(trace, out);
}

Trace read_trace_csv(std::istream& in, std::int64_t num_slots, Nanos slot_interval) {
    std::string line;
    if (!std::getline(in, line) || line != "id,slot_index,src,dst") {
        throw std::runtime_error("trace CSV must start with header id,slot_index,src,dst");
    }
    Trace trace;
    trace.slots.resize(static_cast<std::size_t>(num_slots));
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        Request r;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(fields >> r.id >> c1 >> r.slot_index >> c2 >> r.src >> c3 >> r.dst) || c1 != ',' ||
            c2 != ',' || c3 != ',') {
            throw std::runtime_error("malformed trace line " + std::to_string(line_no));
        }
        if (r.src == r.dst) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + " has src == dst");
        }
        if (r.slot_index < 0 || r.slot_index >= num_slots) {
            continue;
        }
        r.t_gen = r.slot_index * slot_interval;
        trace.slots[static_cast<std::size_t>(r.slot_index)].push_back(r);
    }
    return trace;
}

Trace load_trace(const std::filesystem::path& path, std::int64_t num_slots, Nanos slot_interval) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open trace " + path.string());
    }
    return read_trace_csv(in, num_slots, slot_interval);
}

}  // namespace qsched::traffic
