// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <bvcf/bvcf.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace bvcf;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;

    void fail(const std::string& why) {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) {
        n += c == '\n';
    }
    return n;
}

// ------------------------------------------------------------
// 1. Comparison harness on the default scenario
// ------------------------------------------------------------
Outcome comparison_harness() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto cfg = default_scenario();
    if (cfg.vm_pool.size() != 3 || cfg.channel.loss_probability != 0.2 || cfg.rng_seed != 42 ||
        !(cfg.weights == CostWeights{1, 1, 1, 1}) || cfg.task.total_length / cfg.task.cloudlet_size != 10) {
        o.fail("default scenario does not match the documented shape");
    }
    std::set<double> costs;
    for (const auto& vm : cfg.vm_pool) {
        costs.insert(total_cost(vm.link, cfg.weights));
    }
    if (costs.size() != 3) {
        o.fail("VM links are not distinct");
    }

    const auto report = compare_policies(cfg);
    const auto out = std::filesystem::temp_directory_path() / "bvcf_acceptance_compare.csv";
    emit_report(report, ReportFormat::csv, out.string());
    const double elapsed = seconds_since(t0);

    for (const auto* side : {&report.fcfs, &report.round_robin}) {
        if (!side->ok()) {
            o.fail(std::string(to_string(side->config.scheduler.policy)) + " run failed");
            continue;
        }
        std::size_t executed = 0;
        for (const auto& c : side->cloudlets) {
            executed += c.completion_time.has_value();
        }
        if (executed != 10 || side->count(EventKind::cloudlet_executed) != 10) {
            o.fail("not all 10 cloudlets executed");
        }
        const double cost = side->totals.total_execution_cost;
        if (!(cost > 0.0) || !std::isfinite(cost)) {
            o.fail("total_execution_cost not positive and finite");
        }
    }
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto csv = buf.str();
    if (csv.rfind(std::string(comparison_csv_header), 0) != 0 || count_lines(csv) != 1 + 2 * 11 ||
        csv.find("\nfcfs,total,") == std::string::npos || csv.find("\nround_robin,total,") == std::string::npos) {
        o.fail("comparison CSV malformed");
    }
    std::filesystem::remove(out);
    if (elapsed >= 1.0) {
        o.fail("runtime " + std::to_string(elapsed) + " s >= 1 s");
    }
    char line[200];
    std::snprintf(line, sizeof line, "fcfs cost=%g rr cost=%g, %.3f s", report.fcfs.totals.total_execution_cost,
                  report.round_robin.totals.total_execution_cost, elapsed);
    if (o.pass) {
        o.detail = line;
    }
    return o;
}

// ------------------------------------------------------------
// 2. Cost/priority oracle
// ------------------------------------------------------------
Outcome cost_priority_oracle() {
    // Integer-valued inputs keep every weighted sum exact under scaling by 0.5, 2 and 10.
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_int_distribution<int> metric(0, 20);
    std::uniform_int_distribution<int> bw(1, 200);
    std::uniform_int_distribution<int> weight(0, 5);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        CostWeights w{static_cast<double>(weight(rng)), static_cast<double>(weight(rng)),
                      static_cast<double>(weight(rng)), static_cast<double>(weight(rng))};
        if (w.alpha + w.beta + w.gamma + w.delta == 0.0) {
            w.delta = 1.0;
        }
        const int n = size(rng);
        std::vector<oracle::PoolEntry> entries;
        std::vector<LinkMetrics> links;
        std::vector<std::uint32_t> ids(n);
        for (int i = 0; i < n; ++i) {
            ids[i] = static_cast<std::uint32_t>(i);
        }
        std::shuffle(ids.begin(), ids.end(), rng);
        for (int i = 0; i < n; ++i) {
            const LinkMetrics link{static_cast<std::uint32_t>(metric(rng)), static_cast<double>(metric(rng)),
                                   static_cast<double>(bw(rng)), static_cast<double>(metric(rng))};
            links.push_back(link);
            entries.push_back({ids[i], link.hop_count, link.network_delay, link.bandwidth, link.security_cost});
        }
        auto order_with = [&](const CostWeights& cw) {
            std::vector<VirtualMachine> vms;
            for (int i = 0; i < n; ++i) {
                VirtualMachine vm;
                vm.id = VmId{ids[i]};
                vm.link = links[i];
                vm.total_cost = total_cost(links[i], cw, BandwidthMode::literal);
                vms.push_back(vm);
            }
            std::vector<VmId> order;
            for (const auto& e : prioritize_vms(vms)) {
                order.push_back(e.vm_id);
            }
            return order;
        };
        const auto base = order_with(w);
        if (base.front().value != oracle::brute_force_argmin(entries, w.alpha, w.beta, w.gamma, w.delta)) {
            o.fail("select_vm differs from brute-force argmin at trial " + std::to_string(trial));
        }
        for (double k : {0.5, 2.0, 10.0}) {
            if (order_with(w.scaled(k)) != base) {
                o.fail("ordering changed under scaling k=" + std::to_string(k));
            }
        }
        ++checked;
    }
    if (o.pass) {
        o.detail = std::to_string(checked) + " pools, 3 scalings each";
    }
    return o;
}

// ------------------------------------------------------------
// 3. Retransmission statistics
// ------------------------------------------------------------
Outcome retransmission_statistics() {
    Outcome o;
    const auto t0 = Clock::now();
    constexpr double p = 0.3;
    constexpr int transfers = 10000;
    ChannelConfig cfg;
    cfg.loss_probability = p;
    cfg.max_retries.reset();
    LossChannel channel(p, 42);
    const std::vector<Cloudlet> one = {{0, 10, TaskId{0}}};
    const LinkMetrics link{0, 1.0, 10.0, 0.0};
    std::uint64_t total = 0;
    for (int i = 0; i < transfers; ++i) {
        total += run_batch_transfer(one, link, cfg, 0.0, channel).stats.retransmissions;
    }
    const double elapsed = seconds_since(t0);
    const double mean = static_cast<double>(total) / transfers;
    const double expected = oracle::expected_retransmissions(p);
    const double rel = std::abs(mean - expected) / expected;
    if (rel > 0.05) {
        o.fail("mean " + std::to_string(mean) + " deviates " + std::to_string(rel * 100) + "% from " +
               std::to_string(expected));
    }
    if (elapsed >= 5.0) {
        o.fail("runtime " + std::to_string(elapsed) + " s >= 5 s");
    }
    if (o.pass) {
        char line[160];
        std::snprintf(line, sizeof line, "mean %.5f vs %.5f (%.2f%%), %.3f s", mean, expected, rel * 100, elapsed);
        o.detail = line;
    }
    return o;
}

// ------------------------------------------------------------
// 4. Scheduler oracles
// ------------------------------------------------------------
Outcome scheduler_oracles() {
    Outcome o;
    VirtualMachine vm;
    vm.rate = 1.0;

    auto completions = [](const ExecutionTrace& t) {
        std::vector<double> out;
        for (const auto& c : t.completions) {
            out.push_back(c.completion);
        }
        return out;
    };
    const std::vector<QueuedCloudlet> two = {{0, 25, 0.0}, {1, 25, 0.0}};
    if (completions(schedule_rr(two, vm, 10.0, 0.0)) != std::vector<double>{45, 50}) {
        o.fail("schedule_rr(25,25; tq=10) != [45, 50]");
    }
    const std::vector<QueuedCloudlet> three = {{0, 10, 0.0}, {1, 10, 0.0}, {2, 10, 0.0}};
    if (completions(schedule_fcfs(three, vm, 0.0)) != std::vector<double>{10, 20, 30}) {
        o.fail("schedule_fcfs(10,10,10) != [10, 20, 30]");
    }

    // Every queue of 1..5 cloudlets with lengths 1..30, in every order.
    std::uint64_t queues = 0;
    const std::uint64_t tqs[] = {1, 7, 10};
    std::vector<std::uint64_t> lengths;
    std::vector<QueuedCloudlet> q;
    std::function<void(std::size_t)> sweep = [&](std::size_t n) {
        if (lengths.size() == n) {
            q.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                q[i] = {i, lengths[i], 0.0};
            }
            const auto fcfs = oracle::fcfs_completions(lengths);
            const auto f = schedule_fcfs(q, vm, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (f.completions[i].completion != static_cast<double>(fcfs[i])) {
                    o.fail("FCFS mismatch");
                }
            }
            for (const auto tq : tqs) {
                const auto rr = oracle::rr_completions(lengths, tq);
                const auto r = schedule_rr(q, vm, static_cast<double>(tq), 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    if (r.completions[i].completion != static_cast<double>(rr[i])) {
                        o.fail("RR mismatch, tq=" + std::to_string(tq));
                    }
                }
            }
            ++queues;
            return;
        }
        for (std::uint64_t l = 1; l <= 30; ++l) {
            lengths.push_back(l);
            sweep(n);
            lengths.pop_back();
        }
    };
    for (std::size_t n = 1; n <= 5; ++n) {
        sweep(n);
    }
    if (o.pass) {
        o.detail = std::to_string(queues) + " queues x (FCFS + 3 quanta) match the tick simulator";
    }
    return o;
}

// ------------------------------------------------------------
// 5. Conservation on random scenarios
// ------------------------------------------------------------
ScenarioConfig random_scenario(std::mt19937_64& rng) {
    // Rates, bandwidths and quanta are powers of two, delays and lengths
    // integers: every simulated time is exactly representable.
    std::uniform_int_distribution<Mi> length(1, 3000);
    std::uniform_int_distribution<Mi> size(1, 400);
    std::uniform_int_distribution<int> vms(1, 4);
    std::uniform_int_distribution<int> pow2(0, 4);
    std::uniform_int_distribution<int> small(0, 10);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> batch(1, 12);
    std::uniform_real_distribution<double> loss(0.0, 0.7);

    ScenarioConfig cfg;
    cfg.task = {length(rng), size(rng)};
    const int n = vms(rng);
    for (int i = 0; i < n; ++i) {
        VmCandidate c;
        c.id = VmId{static_cast<std::uint32_t>(i)};
        c.link = LinkMetrics{static_cast<std::uint32_t>(small(rng)), static_cast<double>(small(rng)),
                             static_cast<double>(1 << pow2(rng)) * 8.0, static_cast<double>(small(rng))};
        c.demand = {static_cast<double>(1 << pow2(rng)), 1.0};
        cfg.vm_pool.push_back(c);
    }
    cfg.resource_pool = total_demand(cfg.vm_pool);
    cfg.channel.loss_probability = loss(rng);
    cfg.channel.unit_time = static_cast<double>(1 + small(rng));
    cfg.channel.max_retries.reset();
    cfg.channel.batch_size = static_cast<std::size_t>(batch(rng));
    cfg.scheduler = {coin(rng) ? Policy::fcfs : Policy::round_robin, static_cast<double>(1 << pow2(rng))};
    cfg.dispatch = coin(rng) ? Dispatch::single : Dispatch::spread;
    cfg.rng_seed = rng();
    return cfg;
}

Outcome conservation_suite() {
    Outcome o;
    std::mt19937_64 rng(500);
    for (int trial = 0; trial < 500 && o.pass; ++trial) {
        const auto cfg = random_scenario(rng);
        const auto r = run_scenario(cfg);
        const std::string at = "scenario " + std::to_string(trial) + ": ";
        if (!r.ok()) {
            o.fail(at + "run failed: " + (r.error ? r.error->message : "?"));
            break;
        }

        std::map<VmId, const VmRecord*> vm_of;
        for (const auto& vm : r.vms) {
            vm_of[vm.id] = &vm;
        }
        std::map<CloudletId, double> slice_time;
        std::map<CloudletId, double> slice_work;
        double busy = 0.0;
        for (const auto& vm : r.vms) {
            busy += vm.busy_time;
            for (const auto& s : vm.slices) {
                slice_time[s.cloudlet_id] += s.duration();
                slice_work[s.cloudlet_id] += s.work;
            }
        }

        double service = 0.0;
        std::set<CloudletId> received;
        std::map<CloudletId, int> deliveries;
        for (const auto& e : r.transfer_log) {
            if (!e.lost) {
                ++deliveries[e.cloudlet];
            }
        }
        for (const auto& c : r.cloudlets) {
            const double rate = vm_of.at(*c.vm)->rate;
            const double expected = static_cast<double>(c.length) / rate;
            if (c.service_time != expected || slice_time[c.id] != expected ||
                slice_work[c.id] != static_cast<double>(c.length)) {
                o.fail(at + "service of cloudlet " + std::to_string(c.id) + " != length/rate");
            }
            service += c.service_time;
            if (c.delivered_at) {
                received.insert(c.id);
            }
            if (deliveries[c.id] != 1) {
                o.fail(at + "cloudlet " + std::to_string(c.id) + " delivered " + std::to_string(deliveries[c.id]) +
                       " times");
            }
        }
        if (busy != service) {
            o.fail(at + "sum busy != sum service");
        }

        const auto split = split_task(Task{TaskId{0}, cfg.task.total_length}, cfg.task.cloudlet_size);
        std::set<CloudletId> predicted;
        for (const auto& c : split) {
            predicted.insert(c.id);
        }
        if (received != predicted) {
            o.fail(at + "received set != predicted set");
        }
        std::vector<Cloudlet> executed = split;
        for (auto& c : executed) {
            c.status = r.cloudlets[c.id].completion_time ? CloudletStatus::executed : CloudletStatus::created;
        }
        try {
            if (combine_cloudlets(executed, TaskId{0}, split.size()).total_length != cfg.task.total_length) {
                o.fail(at + "reassembled length differs");
            }
        } catch (const Error& e) {
            o.fail(at + "combine_cloudlets failed: " + e.what());
        }
        if (r.count(EventKind::task_complete) != 1) {
            o.fail(at + "task_complete not emitted exactly once");
        }
    }
    if (o.pass) {
        o.detail = "500 random scenarios";
    }
    return o;
}

// ------------------------------------------------------------
// 6. Determinism
// ------------------------------------------------------------
Outcome determinism() {
    Outcome o;
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        const auto cfg = trial == 0 ? default_scenario() : random_scenario(rng);
        const auto a = report_to_json(run_scenario(cfg)).dump();
        const auto b = report_to_json(run_scenario(cfg)).dump();
        if (a != b) {
            o.fail("scenario " + std::to_string(trial) + " not byte-identical across runs");
        }
    }
    std::set<std::string> traces;
    for (std::uint64_t seed : {1, 2, 3}) {
        auto cfg = default_scenario();
        cfg.channel.loss_probability = 0.5;
        cfg.rng_seed = seed;
        traces.insert(report_to_json(run_scenario(cfg))["transfer_log"].dump());
    }
    if (traces.size() != 3) {
        o.fail("three seeds at p=0.5 did not yield three distinct frame-arrival traces");
    }
    if (o.pass) {
        o.detail = "25 scenarios repeated, 3 seeds distinct";
    }
    return o;
}

// ------------------------------------------------------------
// 7. Turnaround ordering
// ------------------------------------------------------------
Outcome turnaround_ordering() {
    Outcome o;
    VirtualMachine vm;
    vm.rate = 1.0;
    int cases = 0;
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::uint64_t len = 1; len <= 30; ++len) {
            const std::vector<std::uint64_t> lengths(n, len);
            std::vector<QueuedCloudlet> q;
            for (std::size_t i = 0; i < n; ++i) {
                q.push_back({i, len, 0.0});
            }
            const double fcfs_oracle = oracle::mean(oracle::fcfs_completions(lengths));
            double fcfs_impl = 0.0;
            for (const auto& c : schedule_fcfs(q, vm, 0.0).completions) {
                fcfs_impl += c.turnaround();
            }
            fcfs_impl /= static_cast<double>(n);
            for (std::uint64_t tq : {1, 7, 10}) {
                const double rr_oracle = oracle::mean(oracle::rr_completions(lengths, tq));
                double rr_impl = 0.0;
                for (const auto& c : schedule_rr(q, vm, static_cast<double>(tq), 0.0).completions) {
                    rr_impl += c.turnaround();
                }
                rr_impl /= static_cast<double>(n);
                if (fcfs_impl != fcfs_oracle || rr_impl != rr_oracle) {
                    o.fail("implementation differs from the tick simulator");
                }
                if (!(fcfs_impl <= rr_impl)) {
                    o.fail("FCFS mean turnaround > RR for n=" + std::to_string(n) + " len=" + std::to_string(len));
                }
                ++cases;
            }
        }
    }
    // The comparison itself must run and report both totals; no direction is asserted.
    const auto c = compare_policies(default_scenario());
    const double f = c.fcfs.totals.total_execution_cost;
    const double r = c.round_robin.totals.total_execution_cost;
    if (c.status != RunStatus::complete || !std::isfinite(f) || !std::isfinite(r)) {
        o.fail("comparison did not report both totals");
    }
    if (o.pass) {
        char line[200];
        std::snprintf(line, sizeof line, "%d cases; default totals fcfs=%g rr=%g", cases, f, r);
        o.detail = line;
    }
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AC1 comparison harness (default scenario)", comparison_harness},
        {"AC2 cost/priority oracle", cost_priority_oracle},
        {"AC3 retransmission statistics", retransmission_statistics},
        {"AC4 scheduler oracles", scheduler_oracles},
        {"AC5 conservation suite", conservation_suite},
        {"AC6 determinism", determinism},
        {"AC7 turnaround ordering", turnaround_ordering},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
