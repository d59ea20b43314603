#pragma once

#include <bvcf/report_io.hpp>
#include <bvcf/scenario.hpp>
#include <bvcf/sim_engine.hpp>

#include <json.hpp>

#include <string>

namespace bvcf {

/// round_robin minus fcfs.
struct PolicyDeltas {
    double total_execution_cost{0.0};
    SimTime makespan{0.0};
    SimTime mean_turnaround{0.0};
};

struct ComparisonReport {
    RunStatus status{RunStatus::failed};
    SimulationReport fcfs;
    SimulationReport round_robin;
    PolicyDeltas deltas;
};

/// @brief Run the scenario once per policy on identical workload and seed.
///
/// Only scheduler.policy differs between the two sides. If either side
/// fails the comparison is tagged failed but both reports are kept.
inline ComparisonReport compare_policies(const ScenarioConfig& config) {
    config.validate();
    ScenarioConfig fcfs_cfg = config;
    fcfs_cfg.scheduler.policy = Policy::fcfs;
    ScenarioConfig rr_cfg = config;
    rr_cfg.scheduler.policy = Policy::round_robin;

    ComparisonReport out;
    out.fcfs = run_scenario(fcfs_cfg);
    out.round_robin = run_scenario(rr_cfg);
    out.status = out.fcfs.ok() && out.round_robin.ok() ? RunStatus::complete : RunStatus::failed;
    out.deltas.total_execution_cost =
        out.round_robin.totals.total_execution_cost - out.fcfs.totals.total_execution_cost;
    out.deltas.makespan = out.round_robin.totals.makespan - out.fcfs.totals.makespan;
    out.deltas.mean_turnaround = out.round_robin.totals.mean_turnaround - out.fcfs.totals.mean_turnaround;
    return out;
}

inline nlohmann::ordered_json comparison_to_json(const ComparisonReport& c) {
    nlohmann::ordered_json j;
    j["schema_version"] = report_schema_version;
    j["status"] = to_string(c.status);
    j["deltas"] = {{"total_execution_cost", c.deltas.total_execution_cost},
                   {"makespan", c.deltas.makespan},
                   {"mean_turnaround", c.deltas.mean_turnaround}};
    j["summary"] = nlohmann::ordered_json::array();
    for (const auto* r : {&c.fcfs, &c.round_robin}) {
        j["summary"].push_back({{"policy", to_string(r->config.scheduler.policy)},
                                {"status", to_string(r->status)},
                                {"total_execution_cost", r->totals.total_execution_cost},
                                {"makespan", r->totals.makespan},
                                {"mean_turnaround", r->totals.mean_turnaround},
                                {"total_retransmissions", r->totals.total_retransmissions}});
    }
    j["fcfs"] = report_to_json(c.fcfs);
    j["round_robin"] = report_to_json(c.round_robin);
    return j;
}

/// @brief One row per (policy, cloudlet) plus a totals row per policy.
///
/// Totals rows carry the makespan in completion_time, the mean turnaround
/// in turnaround and the run's total execution cost in execution_cost.
inline std::string comparison_to_csv(const ComparisonReport& c) {
    std::string out(comparison_csv_header);
    out += '\n';
    for (const auto* r : {&c.fcfs, &c.round_robin}) {
        const std::string policy = to_string(r->config.scheduler.policy);
        for (const auto& cl : r->cloudlets) {
            out += policy;
            out += ',';
            out += std::to_string(cl.id);
            out += ',';
            detail::append_cloudlet_columns(out, cl);
            out += ',';
            out += detail::format_number(cl.execution_cost);
            out += '\n';
        }
        out += policy;
        out += ",total,";
        detail::append_totals_columns(out, r->totals);
        out += ',';
        out += detail::format_number(r->totals.total_execution_cost);
        out += '\n';
    }
    return out;
}

inline std::string render(const ComparisonReport& c, ReportFormat f) {
    return f == ReportFormat::json ? comparison_to_json(c).dump(2) + "\n" : comparison_to_csv(c);
}

inline void emit_report(const ComparisonReport& c, ReportFormat f, const std::string& path) {
    detail::write_text(render(c, f), path);
}

} // namespace bvcf
