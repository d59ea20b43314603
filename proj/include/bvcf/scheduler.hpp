#pragma once

#include <bvcf/core_model.hpp>
#include <bvcf/error.hpp>

#include <cmath>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bvcf {

/// Numbering follows the user's menu choice: 1 is FCFS, 2 is round robin.
enum class Policy { fcfs = 1, round_robin = 2 };

inline const char* to_string(Policy p) { return p == Policy::fcfs ? "fcfs" : "round_robin"; }

struct SchedulerConfig {
    Policy policy{Policy::fcfs};
    SimTime tq{10.0}; ///< time quantum in time-units, round robin only

    bool operator==(const SchedulerConfig&) const = default;

    void validate(const std::string& field = "scheduler") const {
        if (policy != Policy::fcfs && policy != Policy::round_robin) {
            throw ValidationError(field + ".policy", "must be 1 or 2");
        }
        if (!std::isfinite(tq) || tq <= 0.0) {
            throw ValidationError(field + ".tq", "must be positive");
        }
    }
};

inline SchedulerConfig choose_policy(long long choice, SimTime tq = 10.0) {
    switch (choice) {
    case 1: return {Policy::fcfs, tq};
    case 2: return {Policy::round_robin, tq};
    default: throw InvalidChoice(choice);
    }
}

/// A delivered cloudlet waiting on a VM. arrival is its delivery time.
struct QueuedCloudlet {
    CloudletId id{0};
    Mi length{0};
    SimTime arrival{0.0};
};

struct Slice {
    CloudletId cloudlet_id{0};
    SimTime start{0.0};
    SimTime end{0.0};
    double work{0.0}; ///< MI executed during the slice
    bool finishes{false};

    [[nodiscard]] SimTime duration() const noexcept { return end - start; }
};

struct CloudletCompletion {
    CloudletId id{0};
    SimTime arrival{0.0};
    SimTime completion{0.0};

    [[nodiscard]] SimTime turnaround() const noexcept { return completion - arrival; }
};

struct ExecutionTrace {
    std::vector<Slice> slices;                  ///< in execution order
    std::vector<CloudletCompletion> completions; ///< in queue order

    [[nodiscard]] SimTime busy_time() const {
        SimTime busy = 0.0;
        for (const auto& s : slices) {
            busy += s.duration();
        }
        return busy;
    }

    [[nodiscard]] std::optional<CloudletCompletion> completion_of(CloudletId id) const {
        for (const auto& c : completions) {
            if (c.id == id) {
                return c;
            }
        }
        return std::nullopt;
    }
};

namespace detail {

inline void check_queue(std::span<const QueuedCloudlet> queue, double rate, SimTime start) {
    if (!(rate > 0.0)) {
        throw ValidationError("vm.rate", "must be positive");
    }
    for (const auto& q : queue) {
        if (q.arrival > start) {
            throw ValidationError("queue", "cloudlet " + std::to_string(q.id) + " arrives after execution start");
        }
    }
}

} // namespace detail

/// Run every cloudlet to completion in queue order, without preemption.
inline ExecutionTrace schedule_fcfs(std::span<const QueuedCloudlet> queue, const VirtualMachine& vm, SimTime start) {
    detail::check_queue(queue, vm.rate, start);
    ExecutionTrace trace;
    SimTime t = start;
    for (const auto& q : queue) {
        if (q.length > 0) {
            const SimTime end = t + static_cast<double>(q.length) / vm.rate;
            trace.slices.push_back({q.id, t, end, static_cast<double>(q.length), true});
            t = end;
        }
        trace.completions.push_back({q.id, q.arrival, t});
    }
    return trace;
}

/// @brief Cyclic execution in slices of at most `tq` time-units.
///
/// A cloudlet that finishes inside its quantum, or exactly on the boundary,
/// releases the VM at once and is not requeued. Unfinished cloudlets go to
/// the tail of the cycle.
inline ExecutionTrace schedule_rr(std::span<const QueuedCloudlet> queue, const VirtualMachine& vm, SimTime tq,
                                  SimTime start) {
    detail::check_queue(queue, vm.rate, start);
    if (!(tq > 0.0)) {
        throw ValidationError("scheduler.tq", "must be positive");
    }
    ExecutionTrace trace;
    trace.completions.reserve(queue.size());
    struct Pending {
        std::size_t index;
        double remaining;
    };
    std::deque<Pending> cycle;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        trace.completions.push_back({queue[i].id, queue[i].arrival, start});
        if (queue[i].length > 0) {
            cycle.push_back({i, static_cast<double>(queue[i].length)});
        }
    }
    const double quantum_work = tq * vm.rate;
    SimTime t = start;
    while (!cycle.empty()) {
        Pending p = cycle.front();
        cycle.pop_front();
        const CloudletId id = queue[p.index].id;
        if (p.remaining <= quantum_work) {
            const SimTime end = t + p.remaining / vm.rate;
            trace.slices.push_back({id, t, end, p.remaining, true});
            trace.completions[p.index].completion = end;
            t = end;
        } else {
            const SimTime end = t + tq;
            trace.slices.push_back({id, t, end, quantum_work, false});
            p.remaining -= quantum_work;
            t = end;
            cycle.push_back(p);
        }
    }
    return trace;
}

inline ExecutionTrace schedule(std::span<const QueuedCloudlet> queue, const VirtualMachine& vm,
                               const SchedulerConfig& cfg, SimTime start) {
    return cfg.policy == Policy::fcfs ? schedule_fcfs(queue, vm, start) : schedule_rr(queue, vm, cfg.tq, start);
}

} // namespace bvcf
