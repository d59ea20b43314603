#pragma once

#include <bvcf/error.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bvcf {

/// Length of work in machine instructions (MI).
using Mi = std::uint64_t;

/// Simulation time, in abstract time-units.
using SimTime = double;

/// Dense cloudlet index, unique within its parent task.
using CloudletId = std::uint64_t;

struct TaskId {
    std::uint64_t value{0};
    auto operator<=>(const TaskId&) const = default;
};

struct VmId {
    std::uint32_t value{0};
    auto operator<=>(const VmId&) const = default;
};

inline std::string to_string(VmId id) { return "vm" + std::to_string(id.value); }

struct Task {
    TaskId id;
    Mi total_length{0};

    bool operator==(const Task&) const = default;
};

enum class CloudletStatus { created, delivered, executed };

struct Cloudlet {
    CloudletId id{0};
    Mi length{0};
    TaskId parent_task;
    CloudletStatus status{CloudletStatus::created};

    bool operator==(const Cloudlet&) const = default;
};

/// @brief Per-link inputs of the cost formula.
///
/// bandwidth doubles as the transfer rate of the link, in MI per time-unit.
struct LinkMetrics {
    std::uint32_t hop_count{0};
    SimTime network_delay{0.0};
    double bandwidth{1.0};
    double security_cost{0.0};

    bool operator==(const LinkMetrics&) const = default;

    [[nodiscard]] bool valid() const noexcept {
        return std::isfinite(network_delay) && network_delay >= 0.0 && std::isfinite(bandwidth) &&
               bandwidth > 0.0 && std::isfinite(security_cost) && security_cost >= 0.0;
    }
};

enum class VmState { requested, granted, created, busy, idle };

inline const char* to_string(VmState s) {
    switch (s) {
    case VmState::requested: return "requested";
    case VmState::granted: return "granted";
    case VmState::created: return "created";
    case VmState::busy: return "busy";
    case VmState::idle: return "idle";
    }
    return "unknown";
}

struct VirtualMachine {
    VmId id;
    double rate{1.0}; ///< MI per time-unit
    LinkMetrics link;
    double total_cost{0.0};
    VmState state{VmState::requested};
    SimTime created_at{0.0};
};

/// @brief Split a task into cloudlets of `cloudlet_size` MI.
///
/// The last cloudlet carries the remainder when the length is not a multiple
/// of the size. IDs are assigned 0..n-1 in order.
inline std::vector<Cloudlet> split_task(const Task& task, Mi cloudlet_size) {
    if (task.total_length == 0) {
        throw ZeroLengthTask{};
    }
    if (cloudlet_size == 0) {
        throw InvalidSize{};
    }
    const Mi full = task.total_length / cloudlet_size;
    const Mi rest = task.total_length % cloudlet_size;
    std::vector<Cloudlet> out;
    out.reserve(full + (rest != 0 ? 1 : 0));
    for (Mi i = 0; i < full; ++i) {
        out.push_back({i, cloudlet_size, task.id});
    }
    if (rest != 0) {
        out.push_back({full, rest, task.id});
    }
    return out;
}

/// @brief Reassemble a task from its executed cloudlets.
///
/// `cloudlet_count` is the number of cloudlets the task was split into.
/// Duplicates are reported before holes; both report the smallest offending id.
inline Task combine_cloudlets(std::span<const Cloudlet> executed, TaskId expected, std::size_t cloudlet_count) {
    std::vector<int> seen(cloudlet_count, 0);
    Mi total = 0;
    for (const auto& c : executed) {
        if (c.parent_task != expected || c.id >= cloudlet_count) {
            throw UnexpectedCloudlet(c.id);
        }
        if (c.status != CloudletStatus::executed) {
            continue;
        }
        ++seen[c.id];
        total += c.length;
    }
    for (std::size_t i = 0; i < cloudlet_count; ++i) {
        if (seen[i] > 1) {
            throw DuplicateCloudlet(i);
        }
    }
    for (std::size_t i = 0; i < cloudlet_count; ++i) {
        if (seen[i] == 0) {
            throw MissingCloudlet(i);
        }
    }
    return Task{expected, total};
}

} // namespace bvcf
