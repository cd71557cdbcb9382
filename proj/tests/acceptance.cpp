// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: tseb_acceptance [path-to-tseb-binary]
#include "tseb/agent.hpp"
#include "tseb/bonus.hpp"
#include "tseb/cli.hpp"
#include "tseb/config.hpp"
#include "tseb/envs.hpp"
#include "tseb/metrics.hpp"
#include "tseb/posterior.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace tseb;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t seeds = 30;

// tolerances
constexpr double chain_zero_gap = 0.10;
constexpr double chain_cluster = 0.05;
constexpr double queue_cluster = 0.02;
constexpr double f_decay_ratio = 0.5;
constexpr double residual_tol = 1e-8;
constexpr double row_l1_mean = 0.02;
constexpr double row_l1_sampled = 0.05;
constexpr double planner_tol = 1e-6;
constexpr double formula_tol = 1e-9;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
    if (!pass) ++failures;
}

std::string fmt(double x, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

using Grid = std::vector<std::vector<MetricsTrace>>; // [lambda][run]

Grid sweep(const ExperimentConfig& cfg) {
    const auto factory = environment_factory(cfg.environment_options());
    Grid grid;
    for (double lambda : cfg.lambdas) {
        std::vector<MetricsTrace> runs;
        for (std::size_t i = 0; i < cfg.runs; ++i)
            runs.push_back(run_experiment(factory, cfg.agent_config(lambda), cfg.prior, run_seed(cfg.seed, i)).trace);
        grid.push_back(std::move(runs));
    }
    return grid;
}

std::vector<double> mean_cumulative(const Grid& grid) {
    std::vector<double> out;
    for (const auto& runs : grid) {
        double sum = 0.0;
        for (const auto& t : runs) sum += t.cumulative_reward();
        out.push_back(sum / double(runs.size()));
    }
    return out;
}

// Mean of a per-episode field over episodes [from, to) and all runs.
template <typename Field>
double window_mean(const std::vector<MetricsTrace>& runs, std::size_t from, std::size_t to, Field field) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& t : runs)
        for (std::size_t e = from; e < to; ++e, ++n) sum += field(t.rows()[e]);
    return sum / double(n);
}

std::string join_values(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + fmt(xs[i], 6);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Every regular file under `dir`, keyed by relative path.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
    std::sort(files.begin(), files.end());
    return files;
}

void check_monotone_bounds(const Grid& grid, std::size_t& runs, bool& ok) {
    for (const auto& cell : grid)
        for (const auto& t : cell) {
            ++runs;
            for (std::size_t e = 1; e < t.size(); ++e) {
                ok = ok && t.rows()[e].tau_bound <= t.rows()[e - 1].tau_bound;
                ok = ok && t.rows()[e].n_min >= t.rows()[e - 1].n_min;
            }
        }
}

} // namespace

int main(int argc, char** argv) {
    const auto started = std::chrono::steady_clock::now();

    auto chain = ExperimentConfig::defaults_for("chain");
    chain.runs = seeds;
    const Grid chain_grid = sweep(chain);
    const auto chain_means = mean_cumulative(chain_grid);
    const double chain_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cout << "chain sweep (" << chain.lambdas.size() << " lambdas x " << seeds << " seeds, "
              << chain.episodes << "x" << chain.horizon << ") in " << fmt(chain_seconds, 3)
              << " s; means: " << join_values(chain_means) << std::endl;

    // 1
    {
        const std::size_t half = std::find(chain.lambdas.begin(), chain.lambdas.end(), 0.5) - chain.lambdas.begin();
        const bool lowest = std::min_element(chain_means.begin(), chain_means.end()) == chain_means.begin();
        const double gap = (chain_means[half] - chain_means[0]) / std::abs(chain_means[half]);
        report(1, "chain lambda=0 lowest and >=10% below lambda=0.5", lowest && gap >= chain_zero_gap,
               "lambda0=" + fmt(chain_means[0], 6) + " lambda0.5=" + fmt(chain_means[half], 6) +
                   " gap=" + fmt(100 * gap, 3) + "% lowest=" + (lowest ? "yes" : "no"));
    }

    // 2
    {
        const std::vector<double> nonzero(chain_means.begin() + 1, chain_means.end());
        const auto [lo, hi] = std::minmax_element(nonzero.begin(), nonzero.end());
        const double spread = (*hi - *lo) / std::min(std::abs(*lo), std::abs(*hi));
        report(2, "chain nonzero-lambda means within 5%", spread <= chain_cluster,
               "min=" + fmt(*lo, 6) + " max=" + fmt(*hi, 6) + " spread=" + fmt(100 * spread, 3) + "%");
    }

    // 3
    auto queue = ExperimentConfig::defaults_for("queuing");
    queue.runs = seeds;
    const auto queue_started = std::chrono::steady_clock::now();
    const Grid queue_grid = sweep(queue);
    const auto queue_means = mean_cumulative(queue_grid);
    std::cout << "queuing sweep in "
              << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - queue_started).count(), 3)
              << " s; means: " << join_values(queue_means) << std::endl;
    {
        const double grid_mean = std::accumulate(queue_means.begin(), queue_means.end(), 0.0) / queue_means.size();
        double worst = 0.0;
        for (double m : queue_means) worst = std::max(worst, std::abs(m - grid_mean) / std::abs(grid_mean));
        double worst_nonzero = 0.0;
        const double nz_mean =
            std::accumulate(queue_means.begin() + 1, queue_means.end(), 0.0) / double(queue_means.size() - 1);
        for (std::size_t i = 1; i < queue_means.size(); ++i)
            worst_nonzero = std::max(worst_nonzero, std::abs(queue_means[i] - nz_mean) / std::abs(nz_mean));
        report(3, "queuing means within 2% of the grid mean", worst <= queue_cluster,
               "grid mean=" + fmt(grid_mean, 6) + " max deviation=" + fmt(100 * worst, 3) +
                   "% (lambda>0 only: " + fmt(100 * worst_nonzero, 3) + "%)");
    }

    // 4
    {
        const std::size_t E = chain.episodes, tenth = E / 10;
        const auto& half = chain_grid[5];
        const auto& ts = chain_grid[10];
        auto f = [](const MetricsRow& r) { return r.f_value; };
        const double first = window_mean(half, 0, tenth, f);
        const double last = window_mean(half, E - tenth, E, f);
        const double ts_last = window_mean(ts, E - tenth, E, f);
        report(4, "f-function decays at lambda=0.5 and stays higher at lambda=1",
               last <= f_decay_ratio * first && ts_last >= last,
               "lambda0.5 first=" + fmt(first) + " last=" + fmt(last) + " ratio=" + fmt(last / first) +
                   "; lambda1 last=" + fmt(ts_last));
    }

    // not a criterion: same measurement under the parameter-distance bonus
    {
        auto alt = chain;
        alt.lambdas = {0.5};
        alt.bonus_mode = BonusMode::param_distance;
        const auto runs = sweep(alt)[0];
        const std::size_t E = alt.episodes, tenth = E / 10;
        auto f = [](const MetricsRow& r) { return r.f_value; };
        const double first = window_mean(runs, 0, tenth, f), last = window_mean(runs, E - tenth, E, f);
        std::cout << "info: param_distance bonus, lambda0.5 f first=" << fmt(first) << " last=" << fmt(last)
                  << " ratio=" << fmt(last / first) << std::endl;
    }

    // 5
    {
        std::size_t runs = 0;
        bool ok = true;
        check_monotone_bounds(chain_grid, runs, ok);
        check_monotone_bounds(queue_grid, runs, ok);
        report(5, "tau_bound nonincreasing and n_min nondecreasing", ok, std::to_string(runs) + " runs checked");
    }

    // 6
    {
        const auto mdp = ChainWorld::build_mdp(0.8);
        const auto weights = BonusWeights::reward_only(5, 2);
        const auto plan = value_iteration(mdp, weights);
        const double residual = oracle::sup_distance(bellman_backup(mdp, weights, plan.values), plan.values);
        const bool all_a = plan.policy == Policy(5, 0);
        report(6, "chain optimal policy is action a everywhere", all_a && residual < residual_tol,
               std::string("all a=") + (all_a ? "yes" : "no") + " residual=" + fmt(residual, 3));
    }

    // 7
    {
        const std::size_t E = chain.episodes, quarter = E / 4;
        auto regret = [](const MetricsRow& r) { return r.episode_regret; };
        const double first = window_mean(chain_grid[10], 0, quarter, regret);
        const double last = window_mean(chain_grid[10], E - quarter, E, regret);
        report(7, "lambda=1 regret falls from first to last quartile", last < first,
               "first=" + fmt(first) + " last=" + fmt(last));
    }

    // 8
    {
        const auto truth = ChainWorld::build_mdp(0.8);
        auto post = init_posterior(5, 2, PriorConfig{});
        Rng rng(8);
        for (std::size_t s = 0; s < 5; ++s)
            for (std::size_t a = 0; a < 2; ++a) {
                const auto row = truth.row(s, a);
                for (int i = 0; i < 10'000; ++i) {
                    const double u = rng.uniform();
                    double c = 0.0;
                    std::size_t k = 0;
                    while (k + 1 < row.size() && u >= (c += row[k])) ++k;
                    post.update(s, a, k, rng.normal(truth.reward(s, a), 0.5));
                }
            }
        std::vector<double> sampled_mean(50, 0.0);
        const int draws = 10'000;
        for (int i = 0; i < draws; ++i) {
            const auto m = sample_model(post, 0.8, rng).mdp;
            for (std::size_t k = 0; k < 50; ++k) sampled_mean[k] += m.transitions()[k] / draws;
        }
        double worst_mean = 0.0, worst_sampled = 0.0;
        for (std::size_t s = 0; s < 5; ++s)
            for (std::size_t a = 0; a < 2; ++a) {
                const auto row = truth.row(s, a);
                const auto mean = post.mean_row(s, a);
                double d_mean = 0.0, d_sampled = 0.0;
                for (std::size_t k = 0; k < 5; ++k) {
                    d_mean += std::abs(mean[k] - row[k]);
                    d_sampled += std::abs(sampled_mean[(s * 2 + a) * 5 + k] - row[k]);
                }
                worst_mean = std::max(worst_mean, d_mean);
                worst_sampled = std::max(worst_sampled, d_sampled);
            }
        report(8, "posterior rows converge to the generating rows",
               worst_mean <= row_l1_mean && worst_sampled <= row_l1_sampled,
               "max L1 posterior mean=" + fmt(worst_mean, 3) + " sampled mean=" + fmt(worst_sampled, 3));
    }

    // 9
    {
        double worst = 0.0;
        bool converged = true;
        for (std::uint64_t i = 0; i < 50; ++i) {
            const auto mdp = oracle::random_mdp(4, 3, 0.9, 9000 + i);
            const auto plan = value_iteration(mdp, BonusWeights::reward_only(4, 3), {.tolerance = 1e-10});
            converged = converged && plan.converged;
            worst = std::max(worst, oracle::sup_distance(plan.values, oracle::brute_force_optimal(mdp)));
        }
        report(9, "value iteration matches policy enumeration", converged && worst <= planner_tol,
               "50 MDPs, max sup error=" + fmt(worst, 3));
    }

    // 10: stated reference values, checked as given
    {
        struct Spot {
            std::string name;
            double got, want;
        };
        const std::vector<Spot> spots = {
            {"f_global(0.1,0.8,10,2)", f_global(0.1, 0.8, 10, 2.0), 5.0},
            {"f_state(0.1,0.8,10)", f_state(0.1, 0.8, 10), 9.0},
            {"tau_bound(10,0.8,5,2,2)", tau_bound(10, 0.8, 5, 2, 2.0), 8.0},
            {"pac_sample_bound(5,2,10,0.5,0.1)",
             pac_sample_bound(5, 2, 10.0, {.epsilon = 0.5, .delta = 0.1}), 1600.0 * std::log(10.0)},
        };
        bool ok = true;
        std::string detail;
        for (const auto& s : spots) {
            const bool pass = std::abs(s.got - s.want) <= formula_tol * std::max(1.0, std::abs(s.want));
            ok = ok && pass;
            detail += (detail.empty() ? "" : "; ") + s.name + "=" + fmt(s.got, 12) + " want " + fmt(s.want, 12) +
                      (pass ? " ok" : " MISMATCH");
        }
        report(10, "formula spot checks", ok, detail);
    }

    // 11: every command twice into the same directory
    {
        const fs::path root = fs::temp_directory_path() / ("tseb_acceptance_" + std::to_string(::getpid()));
        std::ostringstream sink;
        auto cfg = ExperimentConfig::defaults_for("chain");
        cfg.episodes = 50;
        cfg.horizon = 50;
        cfg.seed = 11;
        cfg.runs = 3;
        cfg.lambdas = {0.0, 0.5, 1.0};
        bool ok = true;
        std::vector<std::vector<std::pair<std::string, std::string>>> snapshots;
        for (int pass = 0; pass < 2; ++pass) {
            fs::remove_all(root);
            cfg.output_dir = (root / "run").string();
            ok = ok && cli::cmd_run(cfg, sink, sink) == cli::exit_ok;
            cfg.output_dir = (root / "sweep").string();
            ok = ok && cli::cmd_sweep(cfg, sink, sink) == cli::exit_ok;
            ok = ok && cli::cmd_plotdata(root / "sweep", root / "plot.csv", sink, sink) == cli::exit_ok;
            if (argc > 1) {
                const std::string cmd = std::string(argv[1]) +
                                        " run --env queuing --lambda 0.3 --episodes 20 --horizon 40 --seed 5 -o " +
                                        (root / "binary").string() + " > /dev/null";
                ok = ok && std::system(cmd.c_str()) == 0;
            }
            snapshots.push_back(snapshot(root));
        }
        fs::remove_all(root);
        const bool identical = ok && !snapshots[0].empty() && snapshots[0] == snapshots[1];
        report(11, "fixed-seed commands produce byte-identical files", identical,
               std::to_string(snapshots[0].size()) + " files compared" +
                   (argc > 1 ? " (library and binary)" : ""));
    }

    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << " (" << fmt(total, 3) << " s)" << std::endl;
    return failures ? 1 : 0;
}
