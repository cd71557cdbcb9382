#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tseb {

using ValueFunction = std::vector<double>;
/// Deterministic stationary policy: one action index per state.
using Policy = std::vector<std::size_t>;

/**
 * Finite MDP with dense storage.
 *
 * Transitions are stored row-major as P[(s * A + a) * S + s'], rewards as
 * R[s * A + a]. Rewards are expected (mean) rewards; any observation noise is
 * the business of the environment that generated the model.
 *
 * The constructor validates every invariant and throws on violation, so a
 * TabularMdp that exists is always well formed.
 */
class TabularMdp {
public:
    static constexpr double row_tolerance = 1e-9;

    TabularMdp(std::size_t n_states, std::size_t n_actions, std::vector<double> transition,
               std::vector<double> reward, double discount, double reward_range);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    double discount() const noexcept { return discount_; }
    double reward_range() const noexcept { return reward_range_; }

    double reward(std::size_t s, std::size_t a) const { return reward_[s * n_actions_ + a]; }
    double probability(std::size_t s, std::size_t a, std::size_t s_next) const {
        return transition_[(s * n_actions_ + a) * n_states_ + s_next];
    }
    /// Next-state distribution of (s, a).
    std::span<const double> row(std::size_t s, std::size_t a) const {
        return {transition_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }

    const std::vector<double>& transitions() const noexcept { return transition_; }
    const std::vector<double>& rewards() const noexcept { return reward_; }

    /// Copy with a different discount factor.
    TabularMdp with_discount(double discount) const;

    bool operator==(const TabularMdp&) const = default;

private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<double> transition_;
    std::vector<double> reward_;
    double discount_;
    double reward_range_;
};

/// Mixing weight and bonus table for the modified Bellman operator
///   V(s) = max_a  lambda R(s,a) + (1 - lambda) rho(s,a) + gamma sum_s' P(s'|s,a) V(s').
struct BonusWeights {
    double lambda = 1.0;
    std::vector<double> rho; ///< indexed s * A + a

    /// lambda = 1, rho = 0: the ordinary Bellman operator.
    static BonusWeights reward_only(std::size_t n_states, std::size_t n_actions) {
        return {1.0, std::vector<double>(n_states * n_actions, 0.0)};
    }

    /// Throws StructuralError / InvalidInputError when inconsistent with `mdp`.
    void validate(const TabularMdp& mdp) const;
};

struct PlannerOptions {
    double tolerance = 1e-8;
    std::size_t max_iterations = 10'000;
};

struct PlanResult {
    ValueFunction values;
    Policy policy;
    std::size_t iterations = 0;
    /// Sup-norm change of the last sweep.
    double residual = 0.0;
    bool converged = false;
};

/// Action value under the modified operator.
double q_value(const TabularMdp& mdp, const BonusWeights& weights, std::span<const double> v,
               std::size_t s, std::size_t a);

/// argmax_a q_value(...), lowest index on ties.
std::size_t greedy_action(const TabularMdp& mdp, const BonusWeights& weights,
                          std::span<const double> v, std::size_t s);

/// One application of the modified operator. `v` is not modified.
ValueFunction bellman_backup(const TabularMdp& mdp, const BonusWeights& weights,
                             std::span<const double> v);

/**
 * Value iteration on the modified operator.
 *
 * Stops once a sweep changes V by at most tolerance (1 - gamma) / (2 gamma)
 * in sup-norm, so the returned V has Bellman residual below `tolerance` and
 * lies within tolerance / 2 of the fixed point. `residual` is the last sweep
 * change. When
 * `max_iterations` is exhausted the best iterate is returned with
 * `converged == false`. `initial` (empty = zeros) only affects speed.
 */
PlanResult value_iteration(const TabularMdp& mdp, const BonusWeights& weights,
                           const PlannerOptions& options = {},
                           std::span<const double> initial = {});

/// Greedy policy of `v` under the modified operator.
Policy greedy_policy(const TabularMdp& mdp, const BonusWeights& weights, std::span<const double> v);

/// Exact discounted value of a deterministic policy (dense linear solve).
ValueFunction policy_value(const TabularMdp& mdp, const Policy& policy);

/// Sup-norm of T_pi v - v for the plain (lambda = 1) operator.
double policy_residual(const TabularMdp& mdp, const Policy& policy, std::span<const double> v);

struct FiniteHorizonSolution {
    /// Optimal undiscounted expected return of the full horizon, per start state.
    ValueFunction values;
    /// policy[t][s]: optimal action at time step t (t = 0 is the first step).
    std::vector<Policy> policy;
};

/// Backward induction on the undiscounted H-step problem. Throws
/// InvalidInputError when horizon == 0.
FiniteHorizonSolution solve_finite_horizon(const TabularMdp& mdp, std::size_t horizon);

ValueFunction finite_horizon_values(const TabularMdp& mdp, std::size_t horizon);

} // namespace tseb
