#pragma once

#include "tseb/posterior.hpp"
#include "tseb/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tseb {

/// Visit counts. Only ever incremented, so every derived minimum is
/// nondecreasing over a run.
class CountTable {
public:
    CountTable(std::size_t n_states, std::size_t n_actions);

    void record(std::size_t s, std::size_t a, std::size_t s_next);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    std::uint64_t n_sa(std::size_t s, std::size_t a) const { return n_sa_[s * n_actions_ + a]; }
    std::uint64_t n_sas(std::size_t s, std::size_t a, std::size_t s_next) const {
        return n_sas_[(s * n_actions_ + a) * n_states_ + s_next];
    }
    std::uint64_t n_s(std::size_t s) const { return n_s_[s]; }
    /// min over all (s, a) of n(s, a).
    std::uint64_t n_min() const;
    std::uint64_t total() const noexcept { return total_; }

    bool operator==(const CountTable&) const = default;

private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<std::uint64_t> n_sa_;
    std::vector<std::uint64_t> n_sas_;
    std::vector<std::uint64_t> n_s_;
    std::uint64_t total_ = 0;
};

/// Incremental sample mean of the rewards observed at each (s, a):
///   r <- r + (x - r) / n.
/// Unvisited pairs report `fallback` (the prior mean).
class RunningMeans {
public:
    RunningMeans(std::size_t n_states, std::size_t n_actions, double fallback = 0.0);

    void observe(std::size_t s, std::size_t a, double reward);
    double mean(std::size_t s, std::size_t a) const;
    std::uint64_t count(std::size_t s, std::size_t a) const { return count_[s * n_actions_ + a]; }

private:
    std::size_t n_actions_;
    double fallback_;
    std::vector<double> mean_;
    std::vector<std::uint64_t> count_;
};

enum class BonusMode {
    recurrence,     ///< rho <- (rho + f) / n
    direct,         ///< rho <- f / n
    param_distance, ///< rho <- (1/n) sum of per-visit parameter distances
};

std::string_view to_string(BonusMode mode);
/// Throws InvalidInputError on an unknown name.
BonusMode parse_bonus_mode(std::string_view name);

/// Exploration bonus rho(s, a) >= 0.
class BonusTable {
public:
    BonusTable(std::size_t n_states, std::size_t n_actions, BonusMode mode, double initial = 0.0);

    BonusMode mode() const noexcept { return mode_; }
    double rho(std::size_t s, std::size_t a) const { return rho_[s * n_actions_ + a]; }
    const std::vector<double>& values() const noexcept { return rho_; }

    /**
     * Apply one update for a visit to (s, a). The count for this visit must
     * already be recorded in `counts`; n(s, a) == 0 throws ContractViolation.
     * `value` is the f-value (recurrence, direct) or the parameter distance of
     * the current episode's sample (param_distance).
     */
    void update(std::size_t s, std::size_t a, double value, const CountTable& counts);

private:
    std::size_t n_actions_;
    BonusMode mode_;
    std::vector<double> rho_;
    std::vector<double> distance_sum_;
};

inline void update_rho(BonusTable& bonus, std::size_t s, std::size_t a, double value,
                       const CountTable& counts) {
    bonus.update(s, a, value, counts);
}

/// |sampled - empirical|: the reward gap of one state-action pair.
double k_r(double sampled_reward, double empirical_mean);

/// Value-gap bound for the whole MDP:
///   2/(1-g) [K_r + g/(1-g) delta_r / n_min],  n_min clamped to >= 1.
double f_global(double k_r_max, double gamma, std::uint64_t n_min, double delta_r = 2.0);

/// Per-pair value-gap bound (normalized rewards, delta_r = 2):
///   2/(1-g) [K_r(s,a) + 2g / ((1-g) max(n_sa, 1))].
double f_state(double k_r_sa, double gamma, std::uint64_t n_sa);

/**
 * Monte-Carlo estimate of the initial value gap: mean over `n_probe` draws
 * from `post` of f_global with K_r = max_(s,a) |sampled reward - prior mean|
 * and n_min = 1.
 */
double initial_f0(const PosteriorState& post, double gamma, std::size_t n_probe, Rng& rng,
                  double delta_r = 2.0);

} // namespace tseb
