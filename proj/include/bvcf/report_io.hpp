#pragma once

#include <bvcf/config_io.hpp>
#include <bvcf/error.hpp>
#include <bvcf/sim_engine.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>

namespace bvcf {

inline constexpr int report_schema_version = 1;

enum class ReportFormat { json, csv };

inline const char* to_string(RunStatus s) { return s == RunStatus::complete ? "complete" : "failed"; }

/// Header of the per-run CSV. Stable; downstream plots depend on it.
inline constexpr std::string_view csv_header = "cloudlet_id,attempts,retransmissions,delivered_at,completion_time,turnaround";

/// Header of the two-policy comparison CSV.
inline constexpr std::string_view comparison_csv_header =
    "policy,cloudlet_id,attempts,retransmissions,delivered_at,completion_time,turnaround,execution_cost";

namespace detail {

/// Shortest representation that reads back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw IoError("<stdout>");
        }
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path);
    }
    out << text;
    out.close();
    if (!out) {
        throw IoError(path);
    }
}

inline void append_cloudlet_columns(std::string& out, const CloudletRecord& c) {
    out += std::to_string(c.attempts);
    out += ',';
    out += std::to_string(c.retransmissions);
    out += ',';
    out += format_optional(c.delivered_at);
    out += ',';
    out += format_optional(c.completion_time);
    out += ',';
    out += format_optional(c.turnaround);
}

inline void append_totals_columns(std::string& out, const RunTotals& t) {
    out += std::to_string(t.total_attempts);
    out += ',';
    out += std::to_string(t.total_retransmissions);
    out += ',';
    out += format_number(t.transfer_completion);
    out += ',';
    out += format_number(t.makespan);
    out += ',';
    out += format_number(t.mean_turnaround);
}

} // namespace detail

inline nlohmann::ordered_json report_to_json(const SimulationReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["schema_version"] = report_schema_version;
    j["status"] = to_string(r.status);
    j["error"] = r.error ? ordered_json{{"code", r.error->code}, {"message", r.error->message}} : ordered_json(nullptr);
    j["rng_seed"] = r.config.rng_seed;
    j["config"] = config_to_json(r.config);

    auto order = ordered_json::array();
    for (const auto& id : r.priority_order) {
        order.push_back(id.value);
    }
    j["priority_order"] = std::move(order);
    j["rejected_vms"] = r.rejected_vms;

    j["totals"] = {{"makespan", r.totals.makespan},
                   {"total_execution_cost", r.totals.total_execution_cost},
                   {"total_attempts", r.totals.total_attempts},
                   {"total_retransmissions", r.totals.total_retransmissions},
                   {"transfer_completion", r.totals.transfer_completion},
                   {"mean_turnaround", r.totals.mean_turnaround}};

    auto cloudlets = ordered_json::array();
    for (const auto& c : r.cloudlets) {
        ordered_json o;
        o["id"] = c.id;
        o["vm"] = c.vm ? ordered_json(c.vm->value) : ordered_json(nullptr);
        o["length"] = c.length;
        o["attempts"] = c.attempts;
        o["retransmissions"] = c.retransmissions;
        o["delivered_at"] = detail::optional_json(c.delivered_at);
        o["completion_time"] = detail::optional_json(c.completion_time);
        o["turnaround"] = detail::optional_json(c.turnaround);
        o["service_time"] = c.service_time;
        o["execution_cost"] = c.execution_cost;
        cloudlets.push_back(std::move(o));
    }
    j["cloudlets"] = std::move(cloudlets);

    auto vms = ordered_json::array();
    for (const auto& vm : r.vms) {
        ordered_json o;
        o["id"] = vm.id.value;
        o["rate"] = vm.rate;
        o["total_cost"] = vm.total_cost;
        o["state"] = to_string(vm.state);
        o["created_at"] = vm.created_at;
        o["busy_time"] = vm.busy_time;
        o["idle_time"] = vm.idle_time;
        o["cloudlets_assigned"] = vm.cloudlets_assigned;
        auto slices = ordered_json::array();
        for (const auto& s : vm.slices) {
            slices.push_back({{"cloudlet_id", s.cloudlet_id}, {"start", s.start}, {"end", s.end}, {"work", s.work}});
        }
        o["slices"] = std::move(slices);
        vms.push_back(std::move(o));
    }
    j["vms"] = std::move(vms);

    auto log = ordered_json::array();
    for (const auto& e : r.transfer_log) {
        log.push_back({{"vm", e.vm.value},
                       {"cloudlet_id", e.cloudlet},
                       {"attempt", e.attempt},
                       {"sent_at", e.sent_at},
                       {"lost", e.lost},
                       {"arrival_at", detail::optional_json(e.arrival_at)}});
    }
    j["transfer_log"] = std::move(log);

    ordered_json counts;
    for (std::size_t k = 0; k < event_kind_count; ++k) {
        counts[to_string(static_cast<EventKind>(k))] = r.event_counts[k];
    }
    j["event_counts"] = std::move(counts);
    j["resource_pool_after"] = {{"cpu_rate", r.pool_available_after.cpu_rate},
                                {"memory", r.pool_available_after.memory}};
    return j;
}

/// One row per cloudlet, then a totals row:
/// total,Σattempts,Σretransmissions,last delivery,makespan,mean turnaround.
inline std::string report_to_csv(const SimulationReport& r) {
    std::string out(csv_header);
    out += '\n';
    for (const auto& c : r.cloudlets) {
        out += std::to_string(c.id);
        out += ',';
        detail::append_cloudlet_columns(out, c);
        out += '\n';
    }
    out += "total,";
    detail::append_totals_columns(out, r.totals);
    out += '\n';
    return out;
}

inline std::string render(const SimulationReport& r, ReportFormat f) {
    return f == ReportFormat::json ? report_to_json(r).dump(2) + "\n" : report_to_csv(r);
}

/// Write to `path`, or stdout when path is empty or "-". Throws IoError.
inline void emit_report(const SimulationReport& r, ReportFormat f, const std::string& path) {
    detail::write_text(render(r, f), path);
}

} // namespace bvcf
