#pragma once

#include <bvcf/core_model.hpp>
#include <bvcf/cost_model.hpp>
#include <bvcf/provisioning.hpp>
#include <bvcf/scheduler.hpp>
#include <bvcf/transfer_protocol.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace bvcf {

struct TaskSpec {
    Mi total_length{100};
    Mi cloudlet_size{10};

    bool operator==(const TaskSpec&) const = default;
};

struct VmCandidate {
    VmId id;
    LinkMetrics link;
    Resources demand{1.0, 1.0}; ///< cpu_rate becomes the VM's processing rate

    bool operator==(const VmCandidate&) const = default;
};

/// `single` sends the whole task to the head of the prioritized list;
/// `spread` deals cloudlets round-robin over the prioritized list.
enum class Dispatch { single, spread };

/// `lowest_cost` orders VMs by total cost; `pool_order` keeps the configured
/// order (no prioritization, the plain FCFS baseline).
enum class VmSelection { lowest_cost, pool_order };

inline const char* to_string(Dispatch d) { return d == Dispatch::single ? "single" : "spread"; }
inline const char* to_string(VmSelection s) { return s == VmSelection::lowest_cost ? "lowest_cost" : "pool_order"; }

struct ScenarioConfig {
    TaskSpec task;
    std::vector<VmCandidate> vm_pool;
    Resources resource_pool;
    CostWeights weights;
    BandwidthMode bandwidth_mode{BandwidthMode::literal};
    ChannelConfig channel;
    SchedulerConfig scheduler;
    Dispatch dispatch{Dispatch::single};
    VmSelection vm_selection{VmSelection::lowest_cost};
    std::uint64_t rng_seed{0};

    bool operator==(const ScenarioConfig&) const = default;

    /// Throws ValidationError(field, reason) on the first violated invariant.
    void validate() const {
        if (task.total_length == 0) {
            throw ValidationError("task.total_length", "must be positive");
        }
        if (task.cloudlet_size == 0) {
            throw ValidationError("task.cloudlet_size", "must be positive");
        }
        if (vm_pool.empty()) {
            throw ValidationError("vm_pool", "at least one VM candidate is required");
        }
        std::set<VmId> ids;
        for (std::size_t i = 0; i < vm_pool.size(); ++i) {
            const auto& vm = vm_pool[i];
            const std::string at = "vm_pool[" + std::to_string(i) + "]";
            if (!ids.insert(vm.id).second) {
                throw ValidationError(at + ".id", "duplicate VM id");
            }
            if (!std::isfinite(vm.link.network_delay) || vm.link.network_delay < 0.0) {
                throw ValidationError(at + ".link.network_delay", "must be finite and non-negative");
            }
            if (!std::isfinite(vm.link.bandwidth) || vm.link.bandwidth <= 0.0) {
                throw ValidationError(at + ".link.bandwidth", "must be positive");
            }
            if (!std::isfinite(vm.link.security_cost) || vm.link.security_cost < 0.0) {
                throw ValidationError(at + ".link.security_cost", "must be finite and non-negative");
            }
            if (!std::isfinite(vm.demand.cpu_rate) || vm.demand.cpu_rate <= 0.0) {
                throw ValidationError(at + ".demand.cpu_rate", "must be positive");
            }
            if (!std::isfinite(vm.demand.memory) || vm.demand.memory < 0.0) {
                throw ValidationError(at + ".demand.memory", "must be non-negative");
            }
        }
        if (!std::isfinite(resource_pool.cpu_rate) || resource_pool.cpu_rate < 0.0) {
            throw ValidationError("resource_pool.cpu_rate", "must be finite and non-negative");
        }
        if (!std::isfinite(resource_pool.memory) || resource_pool.memory < 0.0) {
            throw ValidationError("resource_pool.memory", "must be finite and non-negative");
        }
        weights.validate();
        channel.validate();
        scheduler.validate();
    }
};

/// Capacity that fits every candidate exactly.
[[nodiscard]] inline Resources total_demand(const std::vector<VmCandidate>& pool) {
    Resources sum;
    for (const auto& vm : pool) {
        sum += vm.demand;
    }
    return sum;
}

/// @brief The reference scenario used by the comparison harness.
///
/// One 1000 MI task in ten 100 MI cloudlets, three VMs with distinct links,
/// unit weights, 20% loss, seed 42, FCFS. Each cloudlet needs more than one
/// quantum on the cheapest VM so the two policies produce different traces.
[[nodiscard]] inline ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    cfg.task = {1000, 100};
    cfg.vm_pool = {
        {VmId{0}, LinkMetrics{2, 10.0, 100.0, 5.0}, Resources{10.0, 8.0}},
        {VmId{1}, LinkMetrics{3, 5.0, 50.0, 2.0}, Resources{4.0, 4.0}},
        {VmId{2}, LinkMetrics{1, 20.0, 200.0, 1.0}, Resources{12.0, 16.0}},
    };
    cfg.resource_pool = {64.0, 64.0};
    cfg.channel.loss_probability = 0.2;
    cfg.channel.unit_time = 1.0;
    cfg.rng_seed = 42;
    return cfg;
}

} // namespace bvcf
