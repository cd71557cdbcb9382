#pragma once

#include "tseb/mdp.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tseb {

/// One row per episode of a run.
struct MetricsRow {
    std::size_t episode = 0;
    double episode_return = 0.0;
    double cumulative_reward = 0.0;
    double f_value = 0.0;
    double f_bound = 0.0;
    double episode_regret = 0.0;
    double avg_regret = 0.0;
    std::uint64_t n_min = 0;
    double tau_bound = 0.0;
    double k_r_max = 0.0;

    bool operator==(const MetricsRow&) const = default;
};

/// Append-only per-episode trace. Cumulative reward and average regret are
/// maintained here so they are always consistent with the stored rows.
class MetricsTrace {
public:
    struct Episode {
        double episode_return;
        double episode_regret;
        double f_value;
        double f_bound;
        std::uint64_t n_min;
        double tau_bound;
        double k_r_max;
    };

    void append(const Episode& episode);

    const std::vector<MetricsRow>& rows() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_.empty(); }
    std::size_t size() const noexcept { return rows_.size(); }
    const MetricsRow& back() const { return rows_.back(); }

    double cumulative_reward() const noexcept { return rows_.empty() ? 0.0 : rows_.back().cumulative_reward; }

    bool operator==(const MetricsTrace&) const = default;

private:
    std::vector<MetricsRow> rows_;
    double regret_sum_ = 0.0;
};

struct PacQuery {
    double epsilon = 0.1;
    double delta = 0.05;
};

/// Optimal undiscounted `horizon`-step return from `start_state` minus the
/// achieved return.
double episode_regret(const TabularMdp& true_mdp, std::size_t horizon, std::size_t start_state,
                      double achieved_return);

/// Caches the oracle value so per-episode regret is O(1).
class RegretOracle {
public:
    RegretOracle(const TabularMdp& true_mdp, std::size_t horizon, std::size_t start_state);
    double optimal_return() const noexcept { return optimal_; }
    double regret(double achieved_return) const { return optimal_ - achieved_return; }

private:
    double optimal_;
};

/// Bound on the summed per-episode reward-gap change:
///   S A c gamma / ((1 - gamma) n_min),  n_min clamped to >= 1, c in (0, 2].
double tau_bound(std::uint64_t n_min, double gamma, std::size_t n_states, std::size_t n_actions,
                 double c = 2.0);

/// Upper bound on the value gap with K_r replaced by its worst-case rate
/// c gamma / ((1 - gamma) n_min):
///   2/(1-g) [c g / ((1-g) n_min) + g/(1-g) delta_r / n_min].
/// Nonincreasing in n_min.
double f_bound(std::uint64_t n_min, double gamma, double c = 2.0, double delta_r = 2.0);

/// Sample-complexity bound 4 S A f0 ln(1/delta) / epsilon^2 (natural log).
double pac_sample_bound(std::size_t n_states, std::size_t n_actions, double f0, const PacQuery& query);

} // namespace tseb
