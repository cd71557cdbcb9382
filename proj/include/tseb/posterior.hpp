#pragma once

#include "tseb/mdp.hpp"
#include "tseb/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tseb {

/// Hyperparameters of the conjugate prior.
struct PriorConfig {
    /// Symmetric Dirichlet concentration for every transition row.
    double dirichlet_alpha = 1.0;
    /// Normal prior on each mean reward.
    double reward_mean = 0.0;
    double reward_precision = 1.0;
    /// Known variance of a single reward observation.
    double obs_noise_variance = 0.25;
    /// Sampled reward means are clipped to [reward_lo, reward_hi].
    double reward_lo = -1.0;
    double reward_hi = 1.0;

    void validate() const;
    bool operator==(const PriorConfig&) const = default;
};

/**
 * Belief over the parameters of a tabular MDP: a Dirichlet per (s, a) over
 * next states and a Normal per (s, a) over the mean reward (known noise
 * variance). Updated by value; one owner per run.
 */
class PosteriorState {
public:
    PosteriorState(std::size_t n_states, std::size_t n_actions, const PriorConfig& prior);

    /// Explicit state, e.g. a concentrated belief for testing. Throws when
    /// any alpha is below the prior concentration or shapes disagree.
    PosteriorState(std::size_t n_states, std::size_t n_actions, const PriorConfig& prior,
                   std::vector<double> alpha, std::vector<double> reward_mean,
                   std::vector<double> reward_precision);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    const PriorConfig& prior() const noexcept { return prior_; }

    double alpha(std::size_t s, std::size_t a, std::size_t s_next) const {
        return alpha_[(s * n_actions_ + a) * n_states_ + s_next];
    }
    double reward_mean(std::size_t s, std::size_t a) const { return reward_mean_[s * n_actions_ + a]; }
    double reward_precision(std::size_t s, std::size_t a) const {
        return reward_precision_[s * n_actions_ + a];
    }
    /// Number of transitions folded in for (s, a).
    std::size_t observations(std::size_t s, std::size_t a) const {
        return observations_[s * n_actions_ + a];
    }

    /// Posterior mean of P(. | s, a).
    std::vector<double> mean_row(std::size_t s, std::size_t a) const;

    /// Conjugate update with one observed transition.
    void update(std::size_t s, std::size_t a, std::size_t s_next, double reward);

    /// Structured-text snapshot. Doubles are written in shortest round-trip
    /// form, so parse(serialize()) reproduces the state field for field.
    std::string serialize() const;
    static PosteriorState parse(const std::string& text);

    bool operator==(const PosteriorState&) const = default;

private:
    void check_pair(std::size_t s, std::size_t a) const;

    std::size_t n_states_;
    std::size_t n_actions_;
    PriorConfig prior_;
    std::vector<double> alpha_;
    std::vector<double> reward_mean_;
    std::vector<double> reward_precision_;
    std::vector<std::size_t> observations_;
};

/// A concrete MDP drawn from the posterior for one episode.
struct SampledModel {
    TabularMdp mdp;
    std::size_t episode_index = 0;
};

PosteriorState init_posterior(std::size_t n_states, std::size_t n_actions, const PriorConfig& prior);

/// Returns a copy of `post` with one more transition folded in.
PosteriorState update_posterior(PosteriorState post, std::size_t s, std::size_t a,
                                std::size_t s_next, double reward);

/// Thompson draw: every transition row from its Dirichlet (normalized Gamma
/// variates), every mean reward from its Normal, clipped to the prior bounds.
SampledModel sample_model(const PosteriorState& post, double discount, Rng& rng,
                          std::size_t episode_index = 0);

/// Posterior-mean transitions and mean rewards (unclipped).
TabularMdp expected_model(const PosteriorState& post, double discount);

} // namespace tseb
