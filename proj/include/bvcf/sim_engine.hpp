#pragma once

#include <bvcf/core_model.hpp>
#include <bvcf/cost_model.hpp>
#include <bvcf/error.hpp>
#include <bvcf/provisioning.hpp>
#include <bvcf/scenario.hpp>
#include <bvcf/scheduler.hpp>
#include <bvcf/transfer_protocol.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvcf {

enum class EventKind {
    task_submitted,
    cloudlets_ready,
    vm_created,
    id_list_sent,
    frame_arrival,
    ack,
    retransmit_due,
    slice_complete,
    cloudlet_executed,
    task_complete,
};

inline constexpr std::size_t event_kind_count = 10;

inline const char* to_string(EventKind k) {
    static constexpr std::array<const char*, event_kind_count> names = {
        "task_submitted", "cloudlets_ready", "vm_created",     "id_list_sent",      "frame_arrival",
        "ack",            "retransmit_due",  "slice_complete", "cloudlet_executed", "task_complete"};
    return names[static_cast<std::size_t>(k)];
}

inline constexpr std::size_t no_lane = std::numeric_limits<std::size_t>::max();

struct Event {
    SimTime at{0.0};
    std::uint64_t seq{0};
    EventKind kind{EventKind::task_submitted};
    std::size_t lane{no_lane}; ///< index of the VM lane the event concerns
    CloudletId cloudlet{0};
    std::size_t slice{0};
};

/// @brief Pending events, popped in (at, seq) order.
class EventQueue {
public:
    /// Enqueue with the next sequence number.
    std::uint64_t schedule(SimTime at, EventKind kind, std::size_t lane = no_lane, CloudletId cloudlet = 0,
                           std::size_t slice = 0) {
        Event e{at, next_seq_, kind, lane, cloudlet, slice};
        push(e);
        return e.seq;
    }

    /// Enqueue an event that already carries its sequence number.
    void push(const Event& e) {
        next_seq_ = std::max(next_seq_, e.seq + 1);
        heap_.push(e);
    }

    Event pop() {
        if (heap_.empty()) {
            throw EmptyQueue{};
        }
        Event e = heap_.top();
        heap_.pop();
        return e;
    }

    [[nodiscard]] bool empty() const noexcept { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) {
                return a.at > b.at;
            }
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_{0};
};

// ------------------------------------------------------------
// Report
// ------------------------------------------------------------

struct CloudletRecord {
    CloudletId id{0};
    Mi length{0};
    std::optional<VmId> vm;
    std::uint32_t attempts{0};
    std::uint32_t retransmissions{0};
    std::optional<SimTime> delivered_at;
    std::optional<SimTime> completion_time;
    std::optional<SimTime> turnaround;
    SimTime service_time{0.0}; ///< length / rate of the executing VM
    double execution_cost{0.0}; ///< service_time x VM total cost
};

struct VmRecord {
    VmId id;
    double rate{0.0};
    LinkMetrics link;
    double total_cost{0.0};
    VmState state{VmState::created};
    SimTime created_at{0.0};
    SimTime busy_time{0.0};
    SimTime idle_time{0.0};
    std::size_t cloudlets_assigned{0};
    std::vector<Slice> slices; ///< executed slices, in time order
};

struct TransferLogEntry {
    VmId vm;
    CloudletId cloudlet{0};
    std::uint32_t attempt{0};
    SimTime sent_at{0.0};
    bool lost{false};
    std::optional<SimTime> arrival_at;
};

struct RunTotals {
    SimTime makespan{0.0};
    double total_execution_cost{0.0};
    std::uint64_t total_attempts{0};
    std::uint64_t total_retransmissions{0};
    SimTime transfer_completion{0.0}; ///< last delivery time
    SimTime mean_turnaround{0.0};
};

struct RunError {
    std::string code;
    std::string message;
};

enum class RunStatus { complete, failed };

struct SimulationReport {
    RunStatus status{RunStatus::failed};
    std::optional<RunError> error;
    ScenarioConfig config;
    std::vector<CloudletRecord> cloudlets;
    std::vector<VmRecord> vms;
    std::vector<VmId> priority_order;
    std::size_t rejected_vms{0};
    RunTotals totals;
    std::vector<TransferLogEntry> transfer_log;
    std::array<std::uint64_t, event_kind_count> event_counts{};
    Resources pool_available_after;

    [[nodiscard]] bool ok() const noexcept { return status == RunStatus::complete; }
    [[nodiscard]] std::uint64_t count(EventKind k) const { return event_counts[static_cast<std::size_t>(k)]; }
};

/// Σ over VMs of total_cost × busy_time.
[[nodiscard]] inline double compute_execution_cost(const SimulationReport& report) {
    double sum = 0.0;
    for (const auto& vm : report.vms) {
        sum += vm.total_cost * vm.busy_time;
    }
    return sum;
}

// ------------------------------------------------------------
// Run state
// ------------------------------------------------------------

/// One provisioned VM and everything in flight towards it.
struct VmLane {
    VirtualMachine vm;
    ResourceGrant grant;
    std::vector<Cloudlet> assigned; ///< ascending id
    std::size_t batch_begin{0};
    TransferState transfer;
    std::size_t cursor{0}; ///< index into transfer.predicted of the cloudlet in flight
    bool transfer_done{false};
    std::vector<QueuedCloudlet> delivered;
    ExecutionTrace trace;
    std::size_t executed{0};
};

using EventObserver = std::function<void(const Event&)>;

struct World {
    explicit World(ScenarioConfig cfg)
        : config(std::move(cfg))
        , pool(config.resource_pool)
        , channel(config.channel.loss_probability, config.rng_seed, config.channel.loss_script) {
        report.config = config;
    }

    ScenarioConfig config;
    ResourcePool pool;
    LossChannel channel;
    SimTime clock{0.0};
    Task task;
    std::vector<Cloudlet> cloudlets;
    std::vector<VmLane> lanes;
    std::size_t vms_announced{0};
    std::size_t executed{0};
    bool finished{false};
    SimulationReport report;
    EventObserver observer;
};

namespace detail {

inline void send_current(EventQueue& q, World& w, std::size_t lane_index) {
    VmLane& lane = w.lanes[lane_index];
    const CloudletId id = lane.transfer.predicted.ids[lane.cursor];
    const Cloudlet& c = w.cloudlets[id];
    const bool lost = w.channel.next_lost();
    const auto outcome = transmit_cloudlet(lane.transfer, c, lane.vm.link, w.clock, lost);

    auto& rec = w.report.cloudlets[id];
    ++rec.attempts;
    rec.retransmissions = rec.attempts - 1;
    TransferLogEntry log{lane.vm.id, id, rec.attempts, w.clock, !outcome.delivered(), std::nullopt};
    if (outcome.delivered()) {
        log.arrival_at = outcome.at;
        q.schedule(outcome.at, EventKind::frame_arrival, lane_index, id);
    } else {
        if (!retry_allowed(lane.transfer, id, w.config.channel)) {
            w.report.transfer_log.push_back(log);
            throw RetryLimitExceeded(id);
        }
        q.schedule(w.clock + w.config.channel.unit_time, EventKind::retransmit_due, lane_index, id);
    }
    w.report.transfer_log.push_back(log);
}

inline void begin_batch(EventQueue& q, World& w, std::size_t lane_index) {
    VmLane& lane = w.lanes[lane_index];
    const std::size_t end = std::min(lane.assigned.size(), lane.batch_begin + w.config.channel.batch_size);
    const std::span<const Cloudlet> batch(lane.assigned.data() + lane.batch_begin, end - lane.batch_begin);
    lane.transfer = TransferState{};
    lane.transfer.predicted = send_id_list(batch);
    lane.transfer.batch_size = w.config.channel.batch_size;
    lane.cursor = 0;
    send_current(q, w, lane_index);
}

inline void dispatch(EventQueue& q, World& w) {
    std::vector<VirtualMachine> vms;
    for (const auto& lane : w.lanes) {
        vms.push_back(lane.vm);
    }
    std::vector<VmId> order;
    if (w.config.vm_selection == VmSelection::lowest_cost) {
        for (const auto& e : prioritize_vms(vms)) {
            order.push_back(e.vm_id);
        }
    } else {
        for (const auto& vm : vms) {
            order.push_back(vm.id);
        }
    }
    w.report.priority_order = order;

    auto lane_of = [&](VmId id) {
        for (std::size_t i = 0; i < w.lanes.size(); ++i) {
            if (w.lanes[i].vm.id == id) {
                return i;
            }
        }
        throw std::logic_error("unknown VM id");
    };

    const std::size_t fan_out = w.config.dispatch == Dispatch::single ? 1 : order.size();
    for (std::size_t k = 0; k < w.cloudlets.size(); ++k) {
        const std::size_t li = lane_of(order[k % fan_out]);
        w.lanes[li].assigned.push_back(w.cloudlets[k]);
        w.report.cloudlets[k].vm = w.lanes[li].vm.id;
    }

    for (const VmId id : order) {
        const std::size_t li = lane_of(id);
        VmLane& lane = w.lanes[li];
        w.report.vms[li].cloudlets_assigned = lane.assigned.size();
        if (lane.assigned.empty()) {
            lane.vm.state = VmState::idle;
            continue;
        }
        lane.vm.state = VmState::busy;
        q.schedule(w.clock, EventKind::id_list_sent, li);
    }
}

inline void start_execution(EventQueue& q, World& w, std::size_t lane_index) {
    VmLane& lane = w.lanes[lane_index];
    lane.trace = schedule(lane.delivered, lane.vm, w.config.scheduler, w.clock);
    for (std::size_t i = 0; i < lane.trace.slices.size(); ++i) {
        const auto& s = lane.trace.slices[i];
        q.schedule(s.end, EventKind::slice_complete, lane_index, s.cloudlet_id, i);
    }
}

} // namespace detail

/// @brief Pop the earliest event and apply it to the run state.
///
/// Handlers may push follow-up events. Throws EmptyQueue, and lets simulation
/// errors (InsufficientResources, RetryLimitExceeded, ...) escape.
inline Event step(EventQueue& q, World& w) {
    const Event e = q.pop();
    if (e.at < w.clock) {
        throw std::logic_error("event scheduled in the past");
    }
    w.clock = e.at;
    ++w.report.event_counts[static_cast<std::size_t>(e.kind)];

    switch (e.kind) {
    case EventKind::task_submitted: {
        w.task = Task{TaskId{0}, w.config.task.total_length};
        w.cloudlets = split_task(w.task, w.config.task.cloudlet_size);
        for (const auto& c : w.cloudlets) {
            CloudletRecord rec;
            rec.id = c.id;
            rec.length = c.length;
            w.report.cloudlets.push_back(rec);
        }
        q.schedule(w.clock, EventKind::cloudlets_ready);
        break;
    }
    case EventKind::cloudlets_ready: {
        std::optional<InsufficientResources> first_refusal;
        for (const auto& cand : w.config.vm_pool) {
            try {
                const auto grant = request_resources(w.pool, cand.demand, w.clock);
                VmLane lane;
                lane.vm = create_vm(cand.id, grant, cand.link, w.config.weights, w.config.bandwidth_mode);
                lane.grant = grant;
                w.lanes.push_back(std::move(lane));
            } catch (const InsufficientResources& ex) {
                ++w.report.rejected_vms;
                if (!first_refusal) {
                    first_refusal = ex;
                }
            }
        }
        if (w.lanes.empty()) {
            throw first_refusal ? *first_refusal : InsufficientResources("cpu_rate");
        }
        for (std::size_t i = 0; i < w.lanes.size(); ++i) {
            const auto& vm = w.lanes[i].vm;
            VmRecord rec;
            rec.id = vm.id;
            rec.rate = vm.rate;
            rec.link = vm.link;
            rec.total_cost = vm.total_cost;
            rec.state = vm.state;
            rec.created_at = vm.created_at;
            w.report.vms.push_back(rec);
            q.schedule(w.clock, EventKind::vm_created, i);
        }
        break;
    }
    case EventKind::vm_created:
        if (++w.vms_announced == w.lanes.size()) {
            detail::dispatch(q, w);
        }
        break;
    case EventKind::id_list_sent:
        detail::begin_batch(q, w, e.lane);
        break;
    case EventKind::frame_arrival: {
        VmLane& lane = w.lanes[e.lane];
        const bool fresh = !lane.transfer.received.contains(e.cloudlet);
        const Response r = receive_cloudlet(lane.transfer, w.cloudlets[e.cloudlet]);
        if (r.kind == Response::Kind::ack) {
            if (fresh) {
                w.cloudlets[e.cloudlet].status = CloudletStatus::delivered;
                w.report.cloudlets[e.cloudlet].delivered_at = w.clock;
                lane.delivered.push_back({e.cloudlet, w.cloudlets[e.cloudlet].length, w.clock});
            }
            q.schedule(w.clock, EventKind::ack, e.lane, e.cloudlet);
        } else {
            q.schedule(w.clock + w.config.channel.unit_time, EventKind::retransmit_due, e.lane, e.cloudlet);
        }
        break;
    }
    case EventKind::ack: {
        VmLane& lane = w.lanes[e.lane];
        if (lane.transfer_done || lane.cursor >= lane.transfer.predicted.size() ||
            lane.transfer.predicted.ids[lane.cursor] != e.cloudlet) {
            break; // duplicate ack
        }
        if (++lane.cursor < lane.transfer.predicted.size()) {
            detail::send_current(q, w, e.lane);
            break;
        }
        lane.batch_begin += lane.transfer.predicted.size();
        if (lane.batch_begin < lane.assigned.size()) {
            q.schedule(w.clock, EventKind::id_list_sent, e.lane);
        } else {
            lane.transfer_done = true;
            detail::start_execution(q, w, e.lane);
        }
        break;
    }
    case EventKind::retransmit_due: {
        VmLane& lane = w.lanes[e.lane];
        if (lane.transfer.received.contains(e.cloudlet) || lane.cursor >= lane.transfer.predicted.size() ||
            lane.transfer.predicted.ids[lane.cursor] != e.cloudlet) {
            break; // stale timer
        }
        detail::send_current(q, w, e.lane);
        break;
    }
    case EventKind::slice_complete: {
        VmLane& lane = w.lanes[e.lane];
        const Slice& s = lane.trace.slices[e.slice];
        auto& rec = w.report.vms[e.lane];
        rec.busy_time += s.duration();
        rec.slices.push_back(s);
        if (s.finishes) {
            q.schedule(w.clock, EventKind::cloudlet_executed, e.lane, s.cloudlet_id);
        }
        break;
    }
    case EventKind::cloudlet_executed: {
        VmLane& lane = w.lanes[e.lane];
        Cloudlet& c = w.cloudlets[e.cloudlet];
        if (c.status == CloudletStatus::executed) {
            throw DuplicateCloudlet(c.id);
        }
        c.status = CloudletStatus::executed;
        auto& rec = w.report.cloudlets[e.cloudlet];
        rec.completion_time = w.clock;
        rec.turnaround = w.clock - rec.delivered_at.value_or(0.0);
        rec.service_time = static_cast<double>(c.length) / lane.vm.rate;
        rec.execution_cost = rec.service_time * lane.vm.total_cost;
        if (++lane.executed == lane.assigned.size()) {
            lane.vm.state = VmState::idle;
        }
        if (++w.executed == w.cloudlets.size()) {
            combine_cloudlets(w.cloudlets, w.task.id, w.cloudlets.size());
            q.schedule(w.clock, EventKind::task_complete);
        }
        break;
    }
    case EventKind::task_complete:
        w.finished = true;
        for (auto& lane : w.lanes) {
            w.pool.release(lane.grant);
        }
        break;
    }

    if (w.observer) {
        w.observer(e);
    }
    return e;
}

/// Queue holding the initial task submission at time zero.
[[nodiscard]] inline EventQueue initial_queue() {
    EventQueue q;
    q.schedule(0.0, EventKind::task_submitted);
    return q;
}

/// Fill derived report fields from the run state.
inline void finalize_report(World& w) {
    auto& r = w.report;
    r.status = w.finished ? RunStatus::complete : RunStatus::failed;
    r.totals = RunTotals{};
    r.totals.makespan = w.clock;
    for (std::size_t i = 0; i < r.vms.size() && i < w.lanes.size(); ++i) {
        r.vms[i].state = w.lanes[i].vm.state;
        r.vms[i].idle_time = r.totals.makespan - r.vms[i].created_at - r.vms[i].busy_time;
    }
    std::size_t completed = 0;
    SimTime turnaround_sum = 0.0;
    for (const auto& c : r.cloudlets) {
        r.totals.total_attempts += c.attempts;
        r.totals.total_retransmissions += c.retransmissions;
        if (c.delivered_at) {
            r.totals.transfer_completion = std::max(r.totals.transfer_completion, *c.delivered_at);
        }
        if (c.turnaround) {
            ++completed;
            turnaround_sum += *c.turnaround;
        }
    }
    r.totals.mean_turnaround = completed ? turnaround_sum / static_cast<double>(completed) : 0.0;
    r.totals.total_execution_cost = compute_execution_cost(r);
    r.pool_available_after = w.pool.available();
}

/// @brief Run one scenario to completion.
///
/// The config is validated first; ValidationError propagates. Any simulation
/// error ends the run early and yields a report tagged failed that carries
/// the error and whatever had been recorded so far.
[[nodiscard]] inline SimulationReport run_scenario(const ScenarioConfig& config, EventObserver observer = {}) {
    config.validate();
    World w(config);
    w.observer = std::move(observer);
    EventQueue q = initial_queue();
    try {
        while (!q.empty()) {
            step(q, w);
        }
        if (!w.finished) {
            throw std::logic_error("event queue drained before task completion");
        }
    } catch (const Error& ex) {
        w.finished = false;
        w.report.error = RunError{ex.code(), ex.what()};
    }
    finalize_report(w);
    return w.report;
}

} // namespace bvcf
