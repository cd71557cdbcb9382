// Command-line driver: single runs, lambda sweeps and plot-data export.

#include "tseb/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Overrides {
    std::string config;
    std::string env;
    double lambda = 0.0;
    std::vector<double> lambdas;
    long long episodes = 0;
    long long horizon = 0;
    double gamma = 0.0;
    unsigned long long seed = 0;
    long long runs = 0;
    std::string bonus_mode;
    std::string cadence;
    double arrival_prob = 0.0;
    std::string output_dir;
    long long threads = 0;
};

struct Options {
    CLI::Option* config = nullptr;
    std::vector<std::pair<CLI::Option*, std::function<void(nlohmann::json&)>>> fields;
};

Options add_experiment_options(CLI::App& cmd, Overrides& o, bool sweep) {
    Options opts;
    opts.config = cmd.add_option("-c,--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    auto add = [&](CLI::Option* opt, std::function<void(nlohmann::json&)> apply) {
        opts.fields.emplace_back(opt, std::move(apply));
    };
    add(cmd.add_option("--env", o.env, "chain | queuing"), [&o](auto& j) { j["env"] = o.env; });
    add(cmd.add_option("--lambda", o.lambda, "reward weight in [0, 1]"), [&o](auto& j) { j["lambda"] = o.lambda; });
    if (sweep)
        add(cmd.add_option("--lambdas", o.lambdas, "lambda grid")->delimiter(','),
            [&o](auto& j) { j["lambdas"] = o.lambdas; });
    add(cmd.add_option("--episodes", o.episodes, "episodes per run"), [&o](auto& j) { j["episodes"] = o.episodes; });
    add(cmd.add_option("--horizon", o.horizon, "steps per episode"), [&o](auto& j) { j["horizon"] = o.horizon; });
    add(cmd.add_option("--gamma", o.gamma, "discount factor"), [&o](auto& j) { j["gamma"] = o.gamma; });
    add(cmd.add_option("--seed", o.seed, "64-bit base seed"), [&o](auto& j) { j["seed"] = o.seed; });
    add(cmd.add_option("--runs", o.runs, "seeds per lambda"), [&o](auto& j) { j["runs"] = o.runs; });
    add(cmd.add_option("--bonus-mode", o.bonus_mode, "recurrence | direct | param_distance"),
        [&o](auto& j) { j["bonus_mode"] = o.bonus_mode; });
    add(cmd.add_option("--cadence", o.cadence, "per_episode | per_step"),
        [&o](auto& j) { j["posterior_cadence"] = o.cadence; });
    add(cmd.add_option("--arrival-prob", o.arrival_prob, "queuing arrival probability"),
        [&o](auto& j) { j["arrival_prob"] = o.arrival_prob; });
    add(cmd.add_option("-o,--output-dir", o.output_dir, "output directory"),
        [&o](auto& j) { j["output_dir"] = o.output_dir; });
    if (sweep)
        add(cmd.add_option("--threads", o.threads, "worker threads (0 = all cores)"),
            [&o](auto& j) { j["threads"] = o.threads; });
    return opts;
}

nlohmann::json collect(const Options& opts) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [opt, apply] : opts.fields)
        if (opt->count() > 0) apply(j);
    return j;
}

std::optional<std::filesystem::path> config_path(const Options& opts, const Overrides& o) {
    if (opts.config->count() == 0) return std::nullopt;
    return std::filesystem::path(o.config);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thompson sampling with an adaptive exploration bonus: experiment runner"};
    app.require_subcommand(1);

    Overrides run_o;
    auto* run = app.add_subcommand("run", "run one configuration and write its per-episode CSV");
    const Options run_opts = add_experiment_options(*run, run_o, false);

    Overrides sweep_o;
    auto* sweep = app.add_subcommand("sweep", "run a lambda grid over several seeds");
    const Options sweep_opts = add_experiment_options(*sweep, sweep_o, true);

    std::string results_dir;
    std::string plot_output = "plotdata.csv";
    auto* plot = app.add_subcommand("plotdata", "export f_value, f_bound and avg_regret in long format");
    plot->add_option("results_dir", results_dir, "directory of per-episode CSV files")->required();
    plot->add_option("-o,--output", plot_output, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return tseb::cli::exit_bad_config;
    }

    if (*run) return tseb::cli::cmd_run(config_path(run_opts, run_o), collect(run_opts), std::cout, std::cerr);
    if (*sweep)
        return tseb::cli::cmd_sweep(config_path(sweep_opts, sweep_o), collect(sweep_opts), std::cout, std::cerr);
    return tseb::cli::cmd_plotdata(results_dir, plot_output, std::cout, std::cerr);
}
