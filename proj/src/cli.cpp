#include "tseb/cli.hpp"

#include "tseb/agent.hpp"
#include "tseb/bonus.hpp"
#include "tseb/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace tseb::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Writes through a temporary file and renames, so readers never observe a
// partially written output.
void write_atomically(const fs::path& path, const std::string& contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot open " + tmp.string() + " for writing");
        file << contents;
        file.flush();
        if (!file) throw IoError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string header_line(const std::string& kind, const ExperimentConfig& config) {
    std::ostringstream os;
    os << "# tseb " << kind << " env=" << config.env << " seed=" << config.seed
       << " runs=" << config.runs << " episodes=" << config.episodes << " horizon=" << config.horizon
       << " gamma=" << format_double(config.gamma) << " bonus_mode=" << to_string(config.bonus_mode)
       << " posterior_cadence=" << to_string(config.cadence);
    if (config.env == "queuing") os << " arrival_prob=" << format_double(config.arrival_prob);
    os << '\n';
    return os.str();
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

void append_rows(std::string& out, std::size_t run_id, double lambda, const MetricsTrace& trace) {
    const std::string lambda_text = format_double(lambda);
    for (const auto& row : trace.rows()) {
        out += std::to_string(run_id);
        out += ',' + lambda_text;
        out += ',' + std::to_string(row.episode);
        out += ',' + format_double(row.episode_return);
        out += ',' + format_double(row.cumulative_reward);
        out += ',' + format_double(row.f_value);
        out += ',' + format_double(row.f_bound);
        out += ',' + format_double(row.avg_regret);
        out += ',' + std::to_string(row.n_min);
        out += ',' + format_double(row.tau_bound);
        out += '\n';
    }
}

MetricsTrace run_one(const ExperimentConfig& config, double lambda, std::size_t run_index) {
    const EnvFactory factory = environment_factory(config.environment_options());
    return run_experiment(factory, config.agent_config(lambda), config.prior,
                          run_seed(config.seed, run_index))
        .trace;
}

double estimate_f0(const ExperimentConfig& config, std::size_t n_states, std::size_t n_actions) {
    Rng probe = Rng(config.seed).split(3);
    return initial_f0(init_posterior(n_states, n_actions, config.prior), config.gamma, config.f0_probes,
                      probe, config.delta_r);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_failure;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_failure;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_failure;
    } catch (const InvalidInputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_partial_failure;
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& text, const fs::path& file) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("malformed number '" + text + "' in " + file.string());
    return value;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

CellSummary summarize(double lambda, const std::vector<MetricsTrace>& traces) {
    CellSummary s;
    s.lambda = lambda;
    s.runs = traces.size();
    if (traces.empty()) return s;
    const double n = static_cast<double>(traces.size());
    for (const auto& t : traces) {
        s.mean_cumulative_reward += t.cumulative_reward();
        s.mean_final_f += t.empty() ? 0.0 : t.back().f_value;
        s.mean_avg_regret += t.empty() ? 0.0 : t.back().avg_regret;
    }
    s.mean_cumulative_reward /= n;
    s.mean_final_f /= n;
    s.mean_avg_regret /= n;
    if (traces.size() > 1) {
        double ss = 0.0;
        for (const auto& t : traces) {
            const double d = t.cumulative_reward() - s.mean_cumulative_reward;
            ss += d * d;
        }
        s.stddev_cumulative_reward = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

ExperimentConfig load_config(const std::optional<fs::path>& config_path, const nlohmann::json& overrides) {
    nlohmann::json layered = nlohmann::json::object();
    if (config_path) {
        std::ifstream file(*config_path);
        if (!file) throw IoError("cannot read config file " + config_path->string());
        try {
            layered = nlohmann::json::parse(file);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config file " + config_path->string() + " is not valid JSON: " + e.what());
        }
        if (!layered.is_object()) throw ConfigError("config file must contain a JSON object");
    }
    if (!overrides.is_null()) {
        for (const auto& [key, value] : overrides.items()) {
            if (key == "prior" && layered.contains("prior") && value.is_object())
                layered["prior"].update(value);
            else
                layered[key] = value;
        }
    }
    return ExperimentConfig::from_json(layered);
}

std::string run_basename(const ExperimentConfig& config) {
    return config.env + "_lambda" + format_double(config.lambda) + "_seed" + std::to_string(config.seed);
}

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        std::vector<MetricsTrace> traces;
        traces.reserve(config.runs);
        for (std::size_t i = 0; i < config.runs; ++i) traces.push_back(run_one(config, config.lambda, i));

        std::string csv = header_line("run", config) + join(episode_columns) + '\n';
        for (std::size_t i = 0; i < traces.size(); ++i) append_rows(csv, i, config.lambda, traces[i]);

        const auto mdp = environment_factory(config.environment_options())(0)->true_mdp();
        const double f0 = estimate_f0(config, mdp.n_states(), mdp.n_actions());
        const CellSummary cell = summarize(config.lambda, traces);

        nlohmann::json summary;
        summary["seed"] = config.seed;
        summary["env"] = config.env;
        summary["lambda"] = config.lambda;
        summary["runs"] = config.runs;
        summary["mean_cumulative_reward"] = cell.mean_cumulative_reward;
        summary["stddev_cumulative_reward"] = cell.stddev_cumulative_reward;
        summary["mean_final_f"] = cell.mean_final_f;
        summary["mean_avg_regret"] = cell.mean_avg_regret;
        std::vector<double> finals;
        for (const auto& t : traces) finals.push_back(t.cumulative_reward());
        summary["final_cumulative_reward"] = finals;
        summary["f0"] = f0;
        summary["pac_epsilon"] = config.pac_epsilon;
        summary["pac_delta"] = config.pac_delta;
        summary["pac_sample_bound"] =
            pac_sample_bound(mdp.n_states(), mdp.n_actions(), f0, {config.pac_epsilon, config.pac_delta});
        summary["config"] = config.to_json();

        const fs::path dir(config.output_dir);
        const fs::path csv_path = dir / (run_basename(config) + ".csv");
        const fs::path summary_path = dir / (run_basename(config) + "_summary.json");
        write_atomically(csv_path, csv);
        write_atomically(summary_path, summary.dump(2) + '\n');
        out << "wrote " << csv_path.string() << " and " << summary_path.string() << '\n'
            << "mean cumulative reward " << format_double(cell.mean_cumulative_reward) << '\n';
        return int(exit_ok);
    });
}

int cmd_run(const std::optional<fs::path>& config_path, const nlohmann::json& overrides, std::ostream& out,
            std::ostream& err) {
    ExperimentConfig config;
    if (const int rc = guarded(err, [&] {
            config = load_config(config_path, overrides);
            return int(exit_ok);
        }))
        return rc;
    return cmd_run(config, out, err);
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const std::size_t n_lambda = config.lambdas.size();
        const std::size_t n_cells = n_lambda * config.runs;
        std::vector<MetricsTrace> traces(n_cells);
        std::vector<std::string> failures(n_cells);
        const fs::path cell_dir = fs::path(config.output_dir) / "cells";
        const std::string header = header_line("cell", config) + join(episode_columns) + '\n';

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t cell = next++; cell < n_cells; cell = next++) {
                const std::size_t li = cell / config.runs;
                const std::size_t run = cell % config.runs;
                const double lambda = config.lambdas[li];
                try {
                    traces[cell] = run_one(config, lambda, run);
                    std::string csv = header;
                    append_rows(csv, run, lambda, traces[cell]);
                    write_atomically(cell_dir / (config.env + "_lambda" + format_double(lambda) + "_run" +
                                                 std::to_string(run) + ".csv"),
                                     csv);
                } catch (const std::exception& e) {
                    failures[cell] = e.what();
                }
            }
        };
        std::size_t n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
        n_threads = std::clamp<std::size_t>(n_threads, 1, n_cells);
        std::vector<std::thread> pool;
        for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        std::string table = header_line("sweep", config) + join(summary_columns) + '\n';
        std::size_t failed = 0;
        for (std::size_t li = 0; li < n_lambda; ++li) {
            std::vector<MetricsTrace> group;
            bool ok = true;
            for (std::size_t run = 0; run < config.runs; ++run) {
                const std::size_t cell = li * config.runs + run;
                if (!failures[cell].empty()) {
                    ok = false;
                    ++failed;
                    err << "cell lambda=" << format_double(config.lambdas[li]) << " run=" << run
                        << " failed: " << failures[cell] << '\n';
                } else {
                    group.push_back(std::move(traces[cell]));
                }
            }
            if (!ok) continue;
            const CellSummary s = summarize(config.lambdas[li], group);
            table += format_double(s.lambda) + ',' + std::to_string(s.runs) + ',' +
                     format_double(s.mean_cumulative_reward) + ',' + format_double(s.stddev_cumulative_reward) +
                     ',' + format_double(s.mean_final_f) + ',' + format_double(s.mean_avg_regret) + '\n';
        }
        const fs::path table_path = fs::path(config.output_dir) / "sweep_summary.csv";
        write_atomically(table_path, table);
        out << "wrote " << table_path.string() << " (" << n_cells - failed << "/" << n_cells
            << " cells succeeded)\n";
        return failed ? int(exit_partial_failure) : int(exit_ok);
    });
}

int cmd_sweep(const std::optional<fs::path>& config_path, const nlohmann::json& overrides, std::ostream& out,
              std::ostream& err) {
    ExperimentConfig config;
    if (const int rc = guarded(err, [&] {
            config = load_config(config_path, overrides);
            return int(exit_ok);
        }))
        return rc;
    return cmd_sweep(config, out, err);
}

int cmd_plotdata(const fs::path& results_dir, const fs::path& output, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!fs::is_directory(results_dir))
            throw ConfigError("results directory " + results_dir.string() + " does not exist");
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(results_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
        std::sort(files.begin(), files.end());

        static const std::vector<std::string> series = {"f_value", "f_bound", "avg_regret"};
        // (lambda, series index, episode) -> (sum, count)
        std::map<std::tuple<double, std::size_t, std::size_t>, std::pair<double, std::size_t>> cells;
        std::set<std::string> seeds;
        std::size_t used = 0;

        for (const auto& file : files) {
            std::ifstream in(file);
            if (!in) throw IoError("cannot read " + file.string());
            std::string line;
            std::vector<std::string> header;
            bool skip = false;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                if (line.rfind('#', 0) == 0) {
                    if (line.rfind("# tseb plotdata", 0) == 0 || line.rfind("# tseb sweep", 0) == 0) {
                        skip = true;
                        break;
                    }
                    const auto pos = line.find(" seed=");
                    if (pos != std::string::npos)
                        seeds.insert(line.substr(pos + 6, line.find(' ', pos + 6) - (pos + 6)));
                    continue;
                }
                header = split_csv(line);
                break;
            }
            if (skip) continue;
            auto column = [&](const std::string& name) -> std::size_t {
                const auto it = std::find(header.begin(), header.end(), name);
                if (it == header.end())
                    throw ConfigError("missing column '" + name + "' in " + file.string());
                return static_cast<std::size_t>(it - header.begin());
            };
            const std::size_t lambda_col = column("lambda");
            const std::size_t episode_col = column("episode");
            std::vector<std::size_t> series_cols;
            for (const auto& name : series) series_cols.push_back(column(name));

            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                const auto row = split_csv(line);
                if (row.size() != header.size())
                    throw ConfigError("row with " + std::to_string(row.size()) + " cells in " + file.string());
                const double lambda = parse_double(row[lambda_col], file);
                const auto episode = static_cast<std::size_t>(parse_double(row[episode_col], file));
                for (std::size_t k = 0; k < series.size(); ++k) {
                    auto& cell = cells[{lambda, k, episode}];
                    cell.first += parse_double(row[series_cols[k]], file);
                    ++cell.second;
                }
            }
            ++used;
        }
        if (used == 0) throw ConfigError("no run CSV files found in " + results_dir.string());

        std::string text = "# tseb plotdata seeds=";
        for (auto it = seeds.begin(); it != seeds.end(); ++it) text += (it == seeds.begin() ? "" : ",") + *it;
        text += "\nlambda,series,episode,value\n";
        for (const auto& [key, acc] : cells) {
            const auto& [lambda, k, episode] = key;
            text += format_double(lambda) + ',' + series[k] + ',' + std::to_string(episode) + ',' +
                    format_double(acc.first / static_cast<double>(acc.second)) + '\n';
        }
        write_atomically(output, text);
        out << "wrote " << output.string() << " (" << cells.size() << " rows from " << used << " files)\n";
        return int(exit_ok);
    });
}

} // namespace tseb::cli
