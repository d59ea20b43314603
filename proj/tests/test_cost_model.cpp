#include <bvcf/cost_model.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

using namespace bvcf;

namespace {

VirtualMachine vm_with_cost(std::uint32_t id, double cost) {
    VirtualMachine vm;
    vm.id = VmId{id};
    vm.total_cost = cost;
    vm.state = VmState::created;
    return vm;
}

std::vector<VmId> ids(const PrioritizedVmList& list) {
    std::vector<VmId> out;
    for (const auto& e : list) {
        out.push_back(e.vm_id);
    }
    return out;
}

} // namespace

TEST(TotalCost, UnitWeightSum) {
    EXPECT_DOUBLE_EQ(total_cost(LinkMetrics{2, 10.0, 100.0, 5.0}, CostWeights{}), 117.0);
}

TEST(TotalCost, SingleTerm) {
    EXPECT_DOUBLE_EQ(total_cost(LinkMetrics{0, 0.0, 1.0, 0.0}, CostWeights{}), 1.0);
}

TEST(TotalCost, WeightedSum) {
    // 2*3 + 0.5*20 + 0.01*1000 + 1*4
    EXPECT_DOUBLE_EQ(total_cost(LinkMetrics{3, 20.0, 1000.0, 4.0}, CostWeights{2.0, 0.5, 0.01, 1.0}), 30.0);
}

TEST(TotalCost, ReciprocalBandwidth) {
    EXPECT_DOUBLE_EQ(total_cost(LinkMetrics{2, 10.0, 100.0, 5.0}, CostWeights{}, BandwidthMode::reciprocal), 17.01);
    EXPECT_DOUBLE_EQ(total_cost(LinkMetrics{0, 0.0, 4.0, 0.0}, CostWeights{}, BandwidthMode::reciprocal), 0.25);
}

TEST(CostWeights, Validation) {
    EXPECT_NO_THROW(CostWeights{}.validate());
    EXPECT_THROW((CostWeights{0, 0, 0, 0}.validate()), ValidationError);
    EXPECT_THROW((CostWeights{-1, 1, 1, 1}.validate()), ValidationError);
    EXPECT_THROW((CostWeights{1, 1, std::numeric_limits<double>::infinity(), 1}.validate()), ValidationError);
}

TEST(PrioritizeVms, SortsByCost) {
    const std::vector<VirtualMachine> vms = {vm_with_cost(1, 5.0), vm_with_cost(2, 2.0), vm_with_cost(3, 9.0)};
    EXPECT_EQ(ids(prioritize_vms(vms)), (std::vector<VmId>{VmId{2}, VmId{1}, VmId{3}}));
}

TEST(PrioritizeVms, TieBreakByAscendingId) {
    const std::vector<VirtualMachine> vms = {vm_with_cost(2, 3.0), vm_with_cost(1, 3.0)};
    EXPECT_EQ(ids(prioritize_vms(vms)), (std::vector<VmId>{VmId{1}, VmId{2}}));
}

TEST(PrioritizeVms, EmptyPool) {
    EXPECT_THROW(prioritize_vms(std::vector<VirtualMachine>{}), EmptyVmPool);
    EXPECT_THROW((void)select_vm(PrioritizedVmList{}), EmptyVmPool);
}

TEST(SelectVm, HeadOfList) {
    const std::vector<VirtualMachine> vms = {vm_with_cost(1, 5.0), vm_with_cost(2, 2.0), vm_with_cost(3, 9.0)};
    EXPECT_EQ(select_vm(prioritize_vms(vms)), VmId{2});
    EXPECT_EQ(select_vm(PrioritizedVmList{{VmId{7}, 1.0}}), VmId{7});
}

TEST(SelectVm, DispatchLoopSkipsBusyVms) {
    std::vector<VirtualMachine> pool = {vm_with_cost(1, 5.0), vm_with_cost(2, 2.0), vm_with_cost(3, 9.0)};
    EXPECT_EQ(select_vm(pool), VmId{2});
    EXPECT_EQ(pool[1].state, VmState::busy);
    EXPECT_EQ(select_vm(pool), VmId{1});
    EXPECT_EQ(select_vm(pool), VmId{3});
    EXPECT_THROW(select_vm(pool), EmptyVmPool);
}

TEST(CostModelProperty, SelectMatchesBruteForceAndIsScaleInvariant) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_int_distribution<std::uint32_t> hops(0, 12);
    std::uniform_real_distribution<double> delay(0.0, 50.0);
    std::uniform_real_distribution<double> bw(1.0, 500.0);
    std::uniform_real_distribution<double> sec(0.0, 10.0);
    std::uniform_real_distribution<double> weight(0.0, 3.0);

    for (int trial = 0; trial < 300; ++trial) {
        const CostWeights w{weight(rng), weight(rng), weight(rng), weight(rng) + 0.01};
        std::vector<oracle::PoolEntry> entries;
        std::vector<VirtualMachine> vms;
        const int n = size(rng);
        for (int i = 0; i < n; ++i) {
            const LinkMetrics link{hops(rng), delay(rng), bw(rng), sec(rng)};
            const std::uint32_t id = static_cast<std::uint32_t>(n - i); // reversed so ties exercise ordering
            entries.push_back({id, link.hop_count, link.network_delay, link.bandwidth, link.security_cost});
            VirtualMachine vm;
            vm.id = VmId{id};
            vm.link = link;
            vm.total_cost = total_cost(link, w);
            vms.push_back(vm);
        }
        const auto list = prioritize_vms(vms);
        EXPECT_EQ(select_vm(list).value, oracle::brute_force_argmin(entries, w.alpha, w.beta, w.gamma, w.delta));

        auto sorted_in = ids(list);
        std::vector<VmId> original;
        for (const auto& vm : vms) {
            original.push_back(vm.id);
        }
        std::sort(sorted_in.begin(), sorted_in.end());
        std::sort(original.begin(), original.end());
        EXPECT_EQ(sorted_in, original);

        for (std::size_t i = 1; i < list.size(); ++i) {
            EXPECT_LE(list[i - 1].total_cost, list[i].total_cost);
        }
    }
}
