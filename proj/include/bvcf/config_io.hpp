#pragma once

#include <bvcf/error.hpp>
#include <bvcf/scenario.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace bvcf {

namespace detail {

/// Walks one JSON object, remembers which keys were read and rejects the rest.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ValidationError(path_, "expected an object");
        }
    }

    [[nodiscard]] std::string at(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    const nlohmann::json& get(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    const nlohmann::json& require(const std::string& key) {
        if (!has(key)) {
            throw ValidationError(at(key), "required field is missing");
        }
        return get(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = get(key);
        if (!v.is_number()) {
            throw ValidationError(at(key), "expected a number");
        }
        return v.get<double>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) {
            return fallback;
        }
        return to_unsigned(get(key), at(key));
    }

    static std::uint64_t to_unsigned(const nlohmann::json& v, const std::string& field) {
        if (v.is_number_unsigned()) {
            return v.get<std::uint64_t>();
        }
        if (v.is_number_integer()) {
            throw ValidationError(field, "must be non-negative");
        }
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && std::floor(d) == d && d < 1.8e19) {
                return static_cast<std::uint64_t>(d);
            }
            throw ValidationError(field, "expected a non-negative integer");
        }
        throw ValidationError(field, "expected a non-negative integer");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = get(key);
        if (!v.is_string()) {
            throw ValidationError(at(key), "expected a string");
        }
        return v.get<std::string>();
    }

    /// Rejects any key that was never read.
    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.contains(key)) {
                throw ValidationError(at(key), "unknown field");
            }
        }
    }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline LinkMetrics read_link(const nlohmann::json& j, const std::string& path) {
    ObjectReader r(j, path);
    LinkMetrics link;
    const auto hops = r.unsigned_integer("hop_count", 0);
    if (hops > 0xFFFFFFFFull) {
        throw ValidationError(r.at("hop_count"), "too large");
    }
    link.hop_count = static_cast<std::uint32_t>(hops);
    link.network_delay = r.number("network_delay", 0.0);
    link.bandwidth = r.number("bandwidth", 1.0);
    link.security_cost = r.number("security_cost", 0.0);
    r.finish();
    return link;
}

inline Resources read_resources(const nlohmann::json& j, const std::string& path, Resources fallback) {
    ObjectReader r(j, path);
    Resources res;
    res.cpu_rate = r.number("cpu_rate", fallback.cpu_rate);
    res.memory = r.number("memory", fallback.memory);
    r.finish();
    return res;
}

inline std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace detail

/// @brief Build a validated config from a parsed JSON document.
///
/// Missing optional fields take their defaults; unknown fields are rejected.
inline ScenarioConfig config_from_json(const nlohmann::json& doc) {
    using detail::ObjectReader;
    ObjectReader root(doc, "");
    ScenarioConfig cfg;

    {
        ObjectReader t(root.require("task"), "task");
        if (!t.has("total_length")) {
            throw ValidationError("task.total_length", "required field is missing");
        }
        cfg.task.total_length = t.unsigned_integer("total_length", 0);
        cfg.task.cloudlet_size = t.unsigned_integer("cloudlet_size", 10);
        t.finish();
    }

    {
        const auto& pool = root.require("vm_pool");
        if (!pool.is_array()) {
            throw ValidationError("vm_pool", "expected an array");
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const std::string at = "vm_pool[" + std::to_string(i) + "]";
            ObjectReader v(pool[i], at);
            VmCandidate cand;
            const auto id = v.unsigned_integer("id", i);
            if (id > 0xFFFFFFFFull) {
                throw ValidationError(v.at("id"), "too large");
            }
            cand.id = VmId{static_cast<std::uint32_t>(id)};
            if (v.has("link")) {
                cand.link = detail::read_link(v.get("link"), at + ".link");
            }
            if (v.has("demand")) {
                cand.demand = detail::read_resources(v.get("demand"), at + ".demand", Resources{1.0, 1.0});
            }
            v.finish();
            cfg.vm_pool.push_back(cand);
        }
    }

    cfg.resource_pool = root.has("resource_pool")
                            ? detail::read_resources(root.get("resource_pool"), "resource_pool", Resources{})
                            : total_demand(cfg.vm_pool);

    if (root.has("weights")) {
        ObjectReader w(root.get("weights"), "weights");
        cfg.weights.alpha = w.number("alpha", 1.0);
        cfg.weights.beta = w.number("beta", 1.0);
        cfg.weights.gamma = w.number("gamma", 1.0);
        cfg.weights.delta = w.number("delta", 1.0);
        w.finish();
    }

    const auto mode = root.text("bandwidth_mode", "literal");
    if (mode == "literal") {
        cfg.bandwidth_mode = BandwidthMode::literal;
    } else if (mode == "reciprocal") {
        cfg.bandwidth_mode = BandwidthMode::reciprocal;
    } else {
        throw ValidationError("bandwidth_mode", "expected \"literal\" or \"reciprocal\"");
    }

    if (root.has("channel")) {
        ObjectReader c(root.get("channel"), "channel");
        cfg.channel.loss_probability = c.number("loss_probability", 0.0);
        cfg.channel.unit_time = c.number("unit_time", 1.0);
        if (c.has("max_retries")) {
            const auto& m = c.get("max_retries");
            if (m.is_string() && m.get<std::string>() == "unlimited") {
                cfg.channel.max_retries.reset();
            } else {
                const auto n = ObjectReader::to_unsigned(m, "channel.max_retries");
                if (n > 0xFFFFFFFFull) {
                    throw ValidationError("channel.max_retries", "too large");
                }
                cfg.channel.max_retries = static_cast<std::uint32_t>(n);
            }
        }
        cfg.channel.batch_size = c.unsigned_integer("batch_size", 10);
        if (c.has("loss_script")) {
            const auto& s = c.get("loss_script");
            if (!s.is_array()) {
                throw ValidationError("channel.loss_script", "expected an array of booleans");
            }
            for (const auto& b : s) {
                if (!b.is_boolean()) {
                    throw ValidationError("channel.loss_script", "expected an array of booleans");
                }
                cfg.channel.loss_script.push_back(b.get<bool>());
            }
        }
        c.finish();
    }

    if (root.has("scheduler")) {
        ObjectReader s(root.get("scheduler"), "scheduler");
        const auto policy = s.unsigned_integer("policy", 1);
        if (policy != 1 && policy != 2) {
            throw ValidationError("scheduler.policy", "must be 1 or 2");
        }
        cfg.scheduler.policy = static_cast<Policy>(policy);
        cfg.scheduler.tq = s.number("tq", 10.0);
        s.finish();
    }

    const auto dispatch = root.text("dispatch", "single");
    if (dispatch == "single") {
        cfg.dispatch = Dispatch::single;
    } else if (dispatch == "spread") {
        cfg.dispatch = Dispatch::spread;
    } else {
        throw ValidationError("dispatch", "expected \"single\" or \"spread\"");
    }

    const auto selection = root.text("vm_selection", "lowest_cost");
    if (selection == "lowest_cost") {
        cfg.vm_selection = VmSelection::lowest_cost;
    } else if (selection == "pool_order") {
        cfg.vm_selection = VmSelection::pool_order;
    } else {
        throw ValidationError("vm_selection", "expected \"lowest_cost\" or \"pool_order\"");
    }

    cfg.rng_seed = root.unsigned_integer("rng_seed", 0);
    root.finish();

    cfg.validate();
    return cfg;
}

inline ScenarioConfig parse_config(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ParseError(detail::line_column(text, ex.byte), ex.what());
    }
    return config_from_json(doc);
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

/// Every field written explicitly, so loading the output reproduces the value.
inline nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::ordered_json j;
    j["task"] = {{"total_length", cfg.task.total_length}, {"cloudlet_size", cfg.task.cloudlet_size}};
    auto pool = nlohmann::ordered_json::array();
    for (const auto& vm : cfg.vm_pool) {
        nlohmann::ordered_json v;
        v["id"] = vm.id.value;
        v["link"] = {{"hop_count", vm.link.hop_count},
                     {"network_delay", vm.link.network_delay},
                     {"bandwidth", vm.link.bandwidth},
                     {"security_cost", vm.link.security_cost}};
        v["demand"] = {{"cpu_rate", vm.demand.cpu_rate}, {"memory", vm.demand.memory}};
        pool.push_back(std::move(v));
    }
    j["vm_pool"] = std::move(pool);
    j["resource_pool"] = {{"cpu_rate", cfg.resource_pool.cpu_rate}, {"memory", cfg.resource_pool.memory}};
    j["weights"] = {{"alpha", cfg.weights.alpha},
                    {"beta", cfg.weights.beta},
                    {"gamma", cfg.weights.gamma},
                    {"delta", cfg.weights.delta}};
    j["bandwidth_mode"] = to_string(cfg.bandwidth_mode);
    nlohmann::ordered_json ch;
    ch["loss_probability"] = cfg.channel.loss_probability;
    ch["unit_time"] = cfg.channel.unit_time;
    if (cfg.channel.max_retries) {
        ch["max_retries"] = *cfg.channel.max_retries;
    } else {
        ch["max_retries"] = "unlimited";
    }
    ch["batch_size"] = cfg.channel.batch_size;
    if (!cfg.channel.loss_script.empty()) {
        auto script = nlohmann::ordered_json::array();
        for (const bool b : cfg.channel.loss_script) {
            script.push_back(b);
        }
        ch["loss_script"] = std::move(script);
    }
    j["channel"] = std::move(ch);
    j["scheduler"] = {{"policy", static_cast<int>(cfg.scheduler.policy)}, {"tq", cfg.scheduler.tq}};
    j["dispatch"] = to_string(cfg.dispatch);
    j["vm_selection"] = to_string(cfg.vm_selection);
    j["rng_seed"] = cfg.rng_seed;
    return j;
}

/// Parse a seed given on the command line or in BVCF_SEED.
inline std::uint64_t parse_seed(std::string_view text, const std::string& field) {
    std::uint64_t seed = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, seed);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ValidationError(field, "expected a non-negative integer");
    }
    return seed;
}

/// Apply BVCF_SEED when it is set. Command-line flags are applied after this.
inline void apply_seed_env(ScenarioConfig& cfg) {
    if (const char* env = std::getenv("BVCF_SEED"); env != nullptr) {
        cfg.rng_seed = parse_seed(env, "BVCF_SEED");
    }
}

} // namespace bvcf
