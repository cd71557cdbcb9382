#pragma once

#include "tseb/config.hpp"
#include "tseb/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tseb::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_partial_failure = 1,
    exit_bad_config = 2,
    exit_io_failure = 3,
};

/// Per-episode CSV columns, in file order.
inline const std::vector<std::string> episode_columns = {
    "run_id", "lambda", "episode", "episode_return", "cumulative_reward",
    "f_value", "f_bound", "avg_regret", "n_min", "tau_bound"};

inline const std::vector<std::string> summary_columns = {
    "lambda", "runs", "mean_cumulative_reward", "stddev_cumulative_reward", "mean_final_f",
    "mean_avg_regret"};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Aggregate over the runs of one lambda value.
struct CellSummary {
    double lambda = 0.0;
    std::size_t runs = 0;
    double mean_cumulative_reward = 0.0;
    double stddev_cumulative_reward = 0.0;
    double mean_final_f = 0.0;
    double mean_avg_regret = 0.0;
};

CellSummary summarize(double lambda, const std::vector<MetricsTrace>& traces);

/// Reads the config file (when given), layers `overrides` on top and
/// validates. Throws ConfigError; I/O problems surface as std::ios_base::failure.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& config_path,
                             const nlohmann::json& overrides);

/// Runs `config.runs` seeds at `config.lambda`; writes the per-episode CSV and
/// a JSON summary into `config.output_dir`. Returns an ExitCode.
int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_run(const std::optional<std::filesystem::path>& config_path, const nlohmann::json& overrides,
            std::ostream& out, std::ostream& err);

/// Runs every (lambda, seed) cell of the grid, writes one CSV per cell under
/// `<output_dir>/cells/` and the per-lambda table to `<output_dir>/sweep_summary.csv`.
int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::optional<std::filesystem::path>& config_path, const nlohmann::json& overrides,
              std::ostream& out, std::ostream& err);

/// Long-format (lambda, series, episode, value) table of f_value, f_bound and
/// avg_regret, averaged over the runs found in `results_dir`.
int cmd_plotdata(const std::filesystem::path& results_dir, const std::filesystem::path& output,
                 std::ostream& out, std::ostream& err);

/// Output file names used by cmd_run.
std::string run_basename(const ExperimentConfig& config);

} // namespace tseb::cli
