#include "tseb/metrics.hpp"

#include "tseb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tseb {

void MetricsTrace::append(const Episode& e) {
    MetricsRow row;
    row.episode = rows_.size();
    row.episode_return = e.episode_return;
    row.cumulative_reward = cumulative_reward() + e.episode_return;
    row.f_value = e.f_value;
    row.f_bound = e.f_bound;
    row.episode_regret = e.episode_regret;
    regret_sum_ += e.episode_regret;
    row.avg_regret = regret_sum_ / static_cast<double>(rows_.size() + 1);
    row.n_min = e.n_min;
    row.tau_bound = e.tau_bound;
    row.k_r_max = e.k_r_max;
    rows_.push_back(row);
}

double episode_regret(const TabularMdp& true_mdp, std::size_t horizon, std::size_t start_state,
                      double achieved_return) {
    return RegretOracle(true_mdp, horizon, start_state).regret(achieved_return);
}

RegretOracle::RegretOracle(const TabularMdp& true_mdp, std::size_t horizon, std::size_t start_state) {
    if (start_state >= true_mdp.n_states()) throw StructuralError("start state out of range");
    optimal_ = finite_horizon_values(true_mdp, horizon)[start_state];
}

namespace {

void check_bound_args(double gamma, double c) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InvalidInputError("gamma must lie in (0, 1), got " + std::to_string(gamma));
    if (!(c > 0.0 && c <= 2.0)) throw InvalidInputError("c must lie in (0, 2], got " + std::to_string(c));
}

} // namespace

double tau_bound(std::uint64_t n_min, double gamma, std::size_t n_states, std::size_t n_actions, double c) {
    check_bound_args(gamma, c);
    const double n = static_cast<double>(std::max<std::uint64_t>(n_min, 1));
    return static_cast<double>(n_states * n_actions) * c * gamma / ((1.0 - gamma) * n);
}

double f_bound(std::uint64_t n_min, double gamma, double c, double delta_r) {
    check_bound_args(gamma, c);
    const double n = static_cast<double>(std::max<std::uint64_t>(n_min, 1));
    const double ratio = gamma / (1.0 - gamma);
    return 2.0 / (1.0 - gamma) * (c * ratio / n + ratio * delta_r / n);
}

double pac_sample_bound(std::size_t n_states, std::size_t n_actions, double f0, const PacQuery& query) {
    if (!(query.epsilon > 0.0)) throw InvalidInputError("epsilon must be > 0");
    if (!(query.delta > 0.0 && query.delta < 1.0)) throw InvalidInputError("delta must lie in (0, 1)");
    if (!(f0 >= 0.0)) throw InvalidInputError("f0 must be >= 0");
    return 4.0 * static_cast<double>(n_states * n_actions) * f0 * std::log(1.0 / query.delta) /
           (query.epsilon * query.epsilon);
}

} // namespace tseb
