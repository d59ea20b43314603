// Command-line entry point: run one scenario or compare FCFS against round robin.

#include <bvcf/bvcf.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int { ok = 0, validation = 2, simulation = 3, io = 4 };

struct Options {
    std::string config_path;
    std::optional<int> policy;
    std::optional<double> tq;
    std::optional<std::string> seed;
    std::optional<double> loss;
    std::string format{"json"};
    std::string out{"-"};
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "Scenario JSON file (default scenario when omitted)");
    cmd->add_option("--tq", o.tq, "Round-robin time quantum");
    cmd->add_option("--seed", o.seed, "RNG seed (overrides BVCF_SEED and the config)");
    cmd->add_option("--loss", o.loss, "Channel loss probability");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "Output path, '-' for stdout");
}

bvcf::ScenarioConfig build_config(const Options& o) {
    bvcf::ScenarioConfig cfg = o.config_path.empty() ? bvcf::default_scenario() : bvcf::load_config(o.config_path);
    bvcf::apply_seed_env(cfg);
    if (o.seed) {
        cfg.rng_seed = bvcf::parse_seed(*o.seed, "--seed");
    }
    if (o.policy) {
        cfg.scheduler = bvcf::choose_policy(*o.policy, cfg.scheduler.tq);
    }
    if (o.tq) {
        cfg.scheduler.tq = *o.tq;
    }
    if (o.loss) {
        cfg.channel.loss_probability = *o.loss;
    }
    cfg.validate();
    return cfg;
}

bvcf::ReportFormat format_of(const Options& o) {
    return o.format == "csv" ? bvcf::ReportFormat::csv : bvcf::ReportFormat::json;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Broker/VM cloudlet transfer and scheduling simulator"};
    app.require_subcommand(1);

    Options run_opts;
    auto* run = app.add_subcommand("run", "Simulate one scenario");
    add_common(run, run_opts);
    run->add_option("--policy", run_opts.policy, "1 = FCFS, 2 = round robin");

    Options cmp_opts;
    auto* compare = app.add_subcommand("compare", "Run FCFS and round robin on the same scenario");
    add_common(compare, cmp_opts);

    std::string default_out{"-"};
    auto* defaults = app.add_subcommand("default-config", "Print the default scenario as JSON");
    defaults->add_option("--out", default_out, "Output path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ExitCode::ok : ExitCode::validation;
    }

    try {
        if (*defaults) {
            bvcf::detail::write_text(bvcf::config_to_json(bvcf::default_scenario()).dump(2) + "\n", default_out);
            return ExitCode::ok;
        }
        if (*run) {
            const auto report = bvcf::run_scenario(build_config(run_opts));
            bvcf::emit_report(report, format_of(run_opts), run_opts.out);
            if (!report.ok()) {
                std::cerr << "bvcf: run failed: " << report.error->message << '\n';
                return ExitCode::simulation;
            }
            return ExitCode::ok;
        }
        const auto report = bvcf::compare_policies(build_config(cmp_opts));
        bvcf::emit_report(report, format_of(cmp_opts), cmp_opts.out);
        if (report.status != bvcf::RunStatus::complete) {
            std::cerr << "bvcf: comparison failed on at least one policy\n";
            return ExitCode::simulation;
        }
        return ExitCode::ok;
    } catch (const bvcf::Error& e) {
        std::cerr << "bvcf: " << e.what() << '\n';
        switch (e.category()) {
        case bvcf::ErrorCategory::validation: return ExitCode::validation;
        case bvcf::ErrorCategory::io: return ExitCode::io;
        case bvcf::ErrorCategory::simulation: return ExitCode::simulation;
        }
        return ExitCode::simulation;
    }
}
