#include "tseb/mdp.hpp"

#include "tseb/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tseb {

namespace {

void check_values(const TabularMdp& mdp, std::span<const double> v) {
    if (v.size() != mdp.n_states())
        throw StructuralError("value function has " + std::to_string(v.size()) +
                              " entries, MDP has " + std::to_string(mdp.n_states()) + " states");
    for (double x : v)
        if (std::isnan(x)) throw InvalidInputError("value function contains NaN");
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TabularMdp::TabularMdp(std::size_t n_states, std::size_t n_actions, std::vector<double> transition,
                       std::vector<double> reward, double discount, double reward_range)
    : n_states_(n_states), n_actions_(n_actions), transition_(std::move(transition)),
      reward_(std::move(reward)), discount_(discount), reward_range_(reward_range) {
    if (n_states_ == 0 || n_actions_ == 0)
        throw StructuralError("MDP needs at least one state and one action");
    if (transition_.size() != n_states_ * n_actions_ * n_states_)
        throw StructuralError("transition tensor has " + std::to_string(transition_.size()) +
                              " entries, expected " +
                              std::to_string(n_states_ * n_actions_ * n_states_));
    if (reward_.size() != n_states_ * n_actions_)
        throw StructuralError("reward table has " + std::to_string(reward_.size()) +
                              " entries, expected " + std::to_string(n_states_ * n_actions_));
    if (!(discount_ > 0.0 && discount_ < 1.0))
        throw InvalidInputError("discount must lie in (0, 1), got " + std::to_string(discount_));

    for (std::size_t sa = 0; sa < n_states_ * n_actions_; ++sa) {
        double total = 0.0;
        for (std::size_t k = 0; k < n_states_; ++k) {
            const double p = transition_[sa * n_states_ + k];
            if (!(p >= 0.0) || !std::isfinite(p))
                throw InvalidInputError("negative or non-finite transition probability at (s=" +
                                        std::to_string(sa / n_actions_) +
                                        ", a=" + std::to_string(sa % n_actions_) + ")");
            total += p;
        }
        if (std::abs(total - 1.0) > row_tolerance)
            throw InvalidInputError("transition row (s=" + std::to_string(sa / n_actions_) +
                                    ", a=" + std::to_string(sa % n_actions_) + ") sums to " +
                                    std::to_string(total));
    }

    for (double r : reward_)
        if (!std::isfinite(r)) throw InvalidInputError("reward table contains a non-finite entry");
    const auto [lo, hi] = std::minmax_element(reward_.begin(), reward_.end());
    if (!(reward_range_ >= 0.0) || !std::isfinite(reward_range_))
        throw InvalidInputError("reward_range must be finite and >= 0");
    // small slack: reward_range is often computed from the same table
    if (reward_range_ < (*hi - *lo) - 1e-12)
        throw InvalidInputError("reward_range " + std::to_string(reward_range_) +
                                " is below the reward span " + std::to_string(*hi - *lo));
}

TabularMdp TabularMdp::with_discount(double discount) const {
    return TabularMdp(n_states_, n_actions_, transition_, reward_, discount, reward_range_);
}

void BonusWeights::validate(const TabularMdp& mdp) const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidInputError("lambda must lie in [0, 1], got " + std::to_string(lambda));
    if (rho.size() != mdp.n_states() * mdp.n_actions())
        throw StructuralError("bonus table has " + std::to_string(rho.size()) +
                              " entries, expected " +
                              std::to_string(mdp.n_states() * mdp.n_actions()));
    for (double r : rho)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw InvalidInputError("bonus entries must be finite and >= 0");
}

double q_value(const TabularMdp& mdp, const BonusWeights& weights, std::span<const double> v,
               std::size_t s, std::size_t a) {
    const auto row = mdp.row(s, a);
    double future = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) future += row[k] * v[k];
    const double immediate = weights.lambda * mdp.reward(s, a) +
                             (1.0 - weights.lambda) * weights.rho[s * mdp.n_actions() + a];
    return immediate + mdp.discount() * future;
}

std::size_t greedy_action(const TabularMdp& mdp, const BonusWeights& weights,
                          std::span<const double> v, std::size_t s) {
    std::size_t best = 0;
    double best_q = q_value(mdp, weights, v, s, 0);
    for (std::size_t a = 1; a < mdp.n_actions(); ++a) {
        const double q = q_value(mdp, weights, v, s, a);
        if (q > best_q) {
            best_q = q;
            best = a;
        }
    }
    return best;
}

ValueFunction bellman_backup(const TabularMdp& mdp, const BonusWeights& weights,
                             std::span<const double> v) {
    weights.validate(mdp);
    check_values(mdp, v);
    ValueFunction out(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.n_actions(); ++a)
            best = std::max(best, q_value(mdp, weights, v, s, a));
        out[s] = best;
    }
    return out;
}

Policy greedy_policy(const TabularMdp& mdp, const BonusWeights& weights, std::span<const double> v) {
    Policy policy(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) policy[s] = greedy_action(mdp, weights, v, s);
    return policy;
}

PlanResult value_iteration(const TabularMdp& mdp, const BonusWeights& weights,
                           const PlannerOptions& options, std::span<const double> initial) {
    if (!(options.tolerance > 0.0)) throw InvalidInputError("planner tolerance must be > 0");
    if (options.max_iterations < 1) throw InvalidInputError("planner max_iterations must be >= 1");
    weights.validate(mdp);

    PlanResult result;
    ValueFunction v(mdp.n_states(), 0.0);
    if (!initial.empty()) {
        check_values(mdp, initial);
        std::copy(initial.begin(), initial.end(), v.begin());
    }

    const std::size_t n_states = mdp.n_states();
    const std::size_t n_actions = mdp.n_actions();
    // a sweep change of tol (1 - g) / (2g) puts V within tol / 2 of the fixed point
    const double gamma = mdp.discount();
    const double stop = options.tolerance * (1.0 - gamma) / (2.0 * gamma);
    ValueFunction next(n_states);
    for (result.iterations = 1; result.iterations <= options.max_iterations; ++result.iterations) {
        for (std::size_t s = 0; s < n_states; ++s) {
            double best = q_value(mdp, weights, v, s, 0);
            for (std::size_t a = 1; a < n_actions; ++a)
                best = std::max(best, q_value(mdp, weights, v, s, a));
            next[s] = best;
        }
        result.residual = sup_distance(next, v);
        v.swap(next);
        if (result.residual <= stop) {
            result.converged = true;
            break;
        }
    }
    result.iterations = std::min(result.iterations, options.max_iterations);
    result.policy = greedy_policy(mdp, weights, v);
    result.values = std::move(v);
    return result;
}

ValueFunction policy_value(const TabularMdp& mdp, const Policy& policy) {
    const std::size_t n = mdp.n_states();
    if (policy.size() != n) throw StructuralError("policy size does not match number of states");
    for (std::size_t a : policy)
        if (a >= mdp.n_actions()) throw StructuralError("policy action out of range");

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                       static_cast<Eigen::Index>(n));
    Eigen::VectorXd rewards(static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < n; ++s) {
        const auto row = mdp.row(s, policy[s]);
        for (std::size_t k = 0; k < n; ++k)
            system(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) -=
                mdp.discount() * row[k];
        rewards(static_cast<Eigen::Index>(s)) = mdp.reward(s, policy[s]);
    }
    const Eigen::VectorXd solution = system.partialPivLu().solve(rewards);

    ValueFunction v(solution.data(), solution.data() + solution.size());
    const double residual = policy_residual(mdp, policy, v);
    if (!std::isfinite(residual) || residual > 1e-10)
        throw NumericalError("policy evaluation residual " + std::to_string(residual) +
                             " exceeds 1e-10");
    return v;
}

double policy_residual(const TabularMdp& mdp, const Policy& policy, std::span<const double> v) {
    double worst = 0.0;
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        const auto row = mdp.row(s, policy[s]);
        double backup = mdp.reward(s, policy[s]);
        for (std::size_t k = 0; k < row.size(); ++k) backup += mdp.discount() * row[k] * v[k];
        worst = std::max(worst, std::abs(backup - v[s]));
    }
    return worst;
}

FiniteHorizonSolution solve_finite_horizon(const TabularMdp& mdp, std::size_t horizon) {
    if (horizon == 0) throw InvalidInputError("horizon must be >= 1");
    const std::size_t n_states = mdp.n_states();
    FiniteHorizonSolution out;
    out.policy.assign(horizon, Policy(n_states, 0));

    ValueFunction to_go(n_states, 0.0);
    ValueFunction next(n_states);
    for (std::size_t t = horizon; t-- > 0;) {
        for (std::size_t s = 0; s < n_states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
                const auto row = mdp.row(s, a);
                double q = mdp.reward(s, a);
                for (std::size_t k = 0; k < n_states; ++k) q += row[k] * to_go[k];
                if (q > best) {
                    best = q;
                    out.policy[t][s] = a;
                }
            }
            next[s] = best;
        }
        to_go.swap(next);
    }
    out.values = std::move(to_go);
    return out;
}

ValueFunction finite_horizon_values(const TabularMdp& mdp, std::size_t horizon) {
    return solve_finite_horizon(mdp, horizon).values;
}

} // namespace tseb
