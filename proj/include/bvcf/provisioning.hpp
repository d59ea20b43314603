#pragma once

#include <bvcf/core_model.hpp>
#include <bvcf/cost_model.hpp>
#include <bvcf/error.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace bvcf {

/// Quantities per resource kind. Kinds are always checked in the order cpu_rate, memory.
/// A zero memory quantity in a demand means memory is not requested.
struct Resources {
    double cpu_rate{0.0}; ///< MI per time-unit
    double memory{0.0};   ///< abstract units

    bool operator==(const Resources&) const = default;

    Resources& operator+=(const Resources& o) {
        cpu_rate += o.cpu_rate;
        memory += o.memory;
        return *this;
    }
    Resources& operator-=(const Resources& o) {
        cpu_rate -= o.cpu_rate;
        memory -= o.memory;
        return *this;
    }
    friend Resources operator+(Resources a, const Resources& b) { return a += b; }
};

struct ResourceGrant {
    std::uint64_t grant_id{0};
    Resources resources;
    SimTime granted_at{0.0};
};

/// @brief Capacity held by the resource provider.
///
/// Every grant is subtracted from `available()`; release() gives it back.
class ResourcePool {
public:
    ResourcePool() = default;
    explicit ResourcePool(Resources capacity) : initial_(capacity), available_(capacity) {}

    [[nodiscard]] const Resources& initial() const noexcept { return initial_; }
    [[nodiscard]] const Resources& available() const noexcept { return available_; }
    [[nodiscard]] const Resources& outstanding() const noexcept { return outstanding_; }

    ResourceGrant grant(const Resources& demand, SimTime now) {
        if (!(demand.cpu_rate > 0.0) || !std::isfinite(demand.cpu_rate)) {
            throw ValidationError("demand.cpu_rate", "must be positive");
        }
        if (!(demand.memory >= 0.0) || !std::isfinite(demand.memory)) {
            throw ValidationError("demand.memory", "must be non-negative");
        }
        if (demand.cpu_rate > available_.cpu_rate) {
            throw InsufficientResources("cpu_rate");
        }
        if (demand.memory > available_.memory) {
            throw InsufficientResources("memory");
        }
        available_ -= demand;
        outstanding_ += demand;
        return ResourceGrant{next_id_++, demand, now};
    }

    void release(const ResourceGrant& g) {
        available_ += g.resources;
        outstanding_ -= g.resources;
    }

private:
    Resources initial_;
    Resources available_;
    Resources outstanding_;
    std::uint64_t next_id_{0};
};

/// Provisioner-to-provider handshake collapsed into one call.
inline ResourceGrant request_resources(ResourcePool& pool, const Resources& demand, SimTime now = 0.0) {
    return pool.grant(demand, now);
}

/// @brief Build a VM from a grant; its cost is fixed at creation.
inline VirtualMachine create_vm(VmId id, const ResourceGrant& grant, const LinkMetrics& link, const CostWeights& w,
                                BandwidthMode mode = BandwidthMode::literal) {
    VirtualMachine vm;
    vm.id = id;
    vm.rate = grant.resources.cpu_rate;
    vm.link = link;
    vm.total_cost = total_cost(link, w, mode);
    vm.state = VmState::created;
    vm.created_at = grant.granted_at;
    return vm;
}

} // namespace bvcf
