#pragma once

#include "tseb/bonus.hpp"
#include "tseb/envs.hpp"
#include "tseb/mdp.hpp"
#include "tseb/metrics.hpp"
#include "tseb/posterior.hpp"
#include "tseb/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tseb {

enum class PosteriorCadence { per_step, per_episode };

std::string_view to_string(PosteriorCadence cadence);
PosteriorCadence parse_cadence(std::string_view name);

struct AgentConfig {
    /// Weight of the sampled reward; 1 - lambda goes to the bonus.
    double lambda = 0.5;
    std::size_t episodes = 1000;
    std::size_t horizon = 100;
    double gamma = 0.8;
    BonusMode bonus_mode = BonusMode::recurrence;
    PlannerOptions planner;
    PosteriorCadence cadence = PosteriorCadence::per_episode;
    /// Reward span used by the global f-function.
    double delta_r = 2.0;
    /// Constant of the convergence bounds, in (0, 2].
    double c = 2.0;

    /// Throws InvalidInputError naming the offending field.
    void validate() const;
};

struct Transition {
    std::size_t s;
    std::size_t a;
    std::size_t s_next;
    double r;

    bool operator==(const Transition&) const = default;
};

struct EpisodeRecord {
    std::size_t episode = 0;
    std::vector<Transition> transitions;
    /// Sum of raw environment rewards.
    double episode_return = 0.0;
    /// max over (s, a) of |sampled reward - running mean| at episode end.
    double k_r_max = 0.0;
    double f_value = 0.0;
    std::uint64_t n_min = 0;
    bool planner_converged = false;
    std::size_t planner_iterations = 0;

    bool operator==(const EpisodeRecord&) const = default;
};

/**
 * Thompson sampling with an adaptive exploration bonus.
 *
 * Each episode draws one MDP from the posterior, solves it once under the
 * bonus-modified Bellman operator, then acts greedily with a one-step
 * lookahead that uses the *current* bonus table against the episode's value
 * function. Counts, running reward means and the bonus are updated after
 * every step; the posterior after every step or at episode end depending on
 * the configured cadence.
 */
class TsebAgent {
public:
    TsebAgent(const AgentConfig& config, PosteriorState posterior);
    TsebAgent(const AgentConfig& config, std::size_t n_states, std::size_t n_actions,
              const PriorConfig& prior);

    /// Runs one episode from `env`'s start state. `rng` drives posterior sampling.
    EpisodeRecord run_episode(Environment& env, Rng& rng);

    const AgentConfig& config() const noexcept { return config_; }
    const PosteriorState& posterior() const noexcept { return posterior_; }
    const CountTable& counts() const noexcept { return counts_; }
    const RunningMeans& means() const noexcept { return means_; }
    const BonusTable& bonus() const noexcept { return bonus_; }
    std::size_t episodes_run() const noexcept { return episode_; }

private:
    AgentConfig config_;
    PosteriorState posterior_;
    CountTable counts_;
    RunningMeans means_;
    BonusTable bonus_;
    ValueFunction warm_start_;
    std::size_t episode_ = 0;
};

/// Bonus assigned to never-visited pairs: the count term of f_state at
/// pseudo-count 1 with zero reward gap.
double initial_bonus(double gamma);

struct ExperimentResult {
    MetricsTrace trace;
    PosteriorState posterior;
    /// Every transition of the run, in order; filled only when requested.
    std::vector<Transition> transitions;
};

struct ExperimentOptions {
    bool keep_transitions = false;
};

/**
 * Runs `config.episodes` episodes with persistent beliefs and returns the
 * per-episode metrics. Seed streams: 1 = environment, 2 = posterior sampling.
 */
ExperimentResult run_experiment(const EnvFactory& env_factory, const AgentConfig& config,
                                const PriorConfig& prior, std::uint64_t seed,
                                const ExperimentOptions& options = {});

} // namespace tseb
