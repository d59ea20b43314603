#pragma once

#include <bvcf/core_model.hpp>
#include <bvcf/error.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace bvcf {

/// @brief Weights applied to hop count, network delay, bandwidth and security cost.
struct CostWeights {
    double alpha{1.0};
    double beta{1.0};
    double gamma{1.0};
    double delta{1.0};

    bool operator==(const CostWeights&) const = default;

    /// Throws ValidationError naming the first bad weight (prefixed by `field`).
    void validate(const std::string& field = "weights") const {
        const std::pair<const char*, double> named[] = {
            {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"delta", delta}};
        for (const auto& [name, w] : named) {
            if (!std::isfinite(w) || w < 0.0) {
                throw ValidationError(field + "." + name, "must be finite and non-negative");
            }
        }
        if (alpha == 0.0 && beta == 0.0 && gamma == 0.0 && delta == 0.0) {
            throw ValidationError(field, "weights must not all be zero");
        }
    }

    [[nodiscard]] CostWeights scaled(double k) const { return {alpha * k, beta * k, gamma * k, delta * k}; }
};

/// How bandwidth enters the cost: as-is (`literal`) or as 1/B (`reciprocal`).
enum class BandwidthMode { literal, reciprocal };

inline const char* to_string(BandwidthMode m) { return m == BandwidthMode::literal ? "literal" : "reciprocal"; }

/// Weighted sum of the four link factors.
[[nodiscard]] inline double total_cost(const LinkMetrics& link, const CostWeights& w,
                                       BandwidthMode mode = BandwidthMode::literal) {
    const double b = mode == BandwidthMode::literal ? link.bandwidth : 1.0 / link.bandwidth;
    return w.alpha * static_cast<double>(link.hop_count) + w.beta * link.network_delay + w.gamma * b +
           w.delta * link.security_cost;
}

struct PrioritizedEntry {
    VmId vm_id;
    double total_cost{0.0};

    bool operator==(const PrioritizedEntry&) const = default;
};

/// Ascending by total_cost, ties by ascending vm_id. Head is the preferred VM.
using PrioritizedVmList = std::vector<PrioritizedEntry>;

[[nodiscard]] inline PrioritizedVmList prioritize_vms(std::span<const VirtualMachine> vms) {
    if (vms.empty()) {
        throw EmptyVmPool{};
    }
    PrioritizedVmList out;
    out.reserve(vms.size());
    for (const auto& vm : vms) {
        out.push_back({vm.id, vm.total_cost});
    }
    std::sort(out.begin(), out.end(), [](const PrioritizedEntry& a, const PrioritizedEntry& b) {
        if (a.total_cost != b.total_cost) {
            return a.total_cost < b.total_cost;
        }
        return a.vm_id < b.vm_id;
    });
    return out;
}

[[nodiscard]] inline VmId select_vm(const PrioritizedVmList& list) {
    if (list.empty()) {
        throw EmptyVmPool{};
    }
    return list.front().vm_id;
}

/// @brief Dispatch-loop selection over a mutable pool.
///
/// Prioritizes the VMs that are not busy, marks the head busy and returns it.
inline VmId select_vm(std::vector<VirtualMachine>& pool) {
    std::vector<VirtualMachine> available;
    for (const auto& vm : pool) {
        if (vm.state == VmState::created || vm.state == VmState::idle) {
            available.push_back(vm);
        }
    }
    const VmId chosen = select_vm(prioritize_vms(available));
    for (auto& vm : pool) {
        if (vm.id == chosen) {
            vm.state = VmState::busy;
        }
    }
    return chosen;
}

} // namespace bvcf
