#include "tseb/bonus.hpp"

#include "tseb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tseb {

CountTable::CountTable(std::size_t n_states, std::size_t n_actions)
    : n_states_(n_states), n_actions_(n_actions), n_sa_(n_states * n_actions, 0),
      n_sas_(n_states * n_actions * n_states, 0), n_s_(n_states, 0) {}

void CountTable::record(std::size_t s, std::size_t a, std::size_t s_next) {
    if (s >= n_states_ || a >= n_actions_ || s_next >= n_states_)
        throw StructuralError("count index out of range");
    ++n_sa_[s * n_actions_ + a];
    ++n_sas_[(s * n_actions_ + a) * n_states_ + s_next];
    ++n_s_[s];
    ++total_;
}

std::uint64_t CountTable::n_min() const { return *std::min_element(n_sa_.begin(), n_sa_.end()); }

RunningMeans::RunningMeans(std::size_t n_states, std::size_t n_actions, double fallback)
    : n_actions_(n_actions), fallback_(fallback), mean_(n_states * n_actions, 0.0),
      count_(n_states * n_actions, 0) {}

void RunningMeans::observe(std::size_t s, std::size_t a, double reward) {
    const std::size_t sa = s * n_actions_ + a;
    if (sa >= mean_.size() || a >= n_actions_) throw StructuralError("running-mean index out of range");
    ++count_[sa];
    mean_[sa] += (reward - mean_[sa]) / static_cast<double>(count_[sa]);
}

double RunningMeans::mean(std::size_t s, std::size_t a) const {
    const std::size_t sa = s * n_actions_ + a;
    return count_[sa] == 0 ? fallback_ : mean_[sa];
}

std::string_view to_string(BonusMode mode) {
    switch (mode) {
    case BonusMode::recurrence: return "recurrence";
    case BonusMode::direct: return "direct";
    case BonusMode::param_distance: return "param_distance";
    }
    return "unknown";
}

BonusMode parse_bonus_mode(std::string_view name) {
    if (name == "recurrence") return BonusMode::recurrence;
    if (name == "direct") return BonusMode::direct;
    if (name == "param_distance") return BonusMode::param_distance;
    throw InvalidInputError("unknown bonus_mode '" + std::string(name) +
                            "' (expected recurrence, direct or param_distance)");
}

BonusTable::BonusTable(std::size_t n_states, std::size_t n_actions, BonusMode mode, double initial)
    : n_actions_(n_actions), mode_(mode), rho_(n_states * n_actions, initial),
      distance_sum_(n_states * n_actions, 0.0) {
    if (!(initial >= 0.0) || !std::isfinite(initial))
        throw InvalidInputError("initial bonus must be finite and >= 0");
}

void BonusTable::update(std::size_t s, std::size_t a, double value, const CountTable& counts) {
    const std::size_t sa = s * n_actions_ + a;
    if (a >= n_actions_ || sa >= rho_.size()) throw StructuralError("bonus index out of range");
    if (!(value >= 0.0) || !std::isfinite(value))
        throw InvalidInputError("bonus update value must be finite and >= 0");
    const std::uint64_t n = counts.n_sa(s, a);
    if (n == 0) throw ContractViolation("bonus update before the visit was counted");

    const double inv_n = 1.0 / static_cast<double>(n);
    switch (mode_) {
    case BonusMode::recurrence: rho_[sa] = (rho_[sa] + value) * inv_n; break;
    case BonusMode::direct: rho_[sa] = value * inv_n; break;
    case BonusMode::param_distance:
        distance_sum_[sa] += value;
        rho_[sa] = distance_sum_[sa] * inv_n;
        break;
    }
}

double k_r(double sampled_reward, double empirical_mean) {
    return std::abs(sampled_reward - empirical_mean);
}

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InvalidInputError("gamma must lie in (0, 1), got " + std::to_string(gamma));
}

double clamp_count(std::uint64_t n) { return static_cast<double>(std::max<std::uint64_t>(n, 1)); }

} // namespace

double f_global(double k_r_max, double gamma, std::uint64_t n_min, double delta_r) {
    check_gamma(gamma);
    if (!(delta_r >= 0.0)) throw InvalidInputError("delta_r must be >= 0");
    const double horizon = 1.0 / (1.0 - gamma);
    return 2.0 * horizon * (k_r_max + gamma * horizon * delta_r / clamp_count(n_min));
}

double f_state(double k_r_sa, double gamma, std::uint64_t n_sa) {
    check_gamma(gamma);
    const double horizon = 1.0 / (1.0 - gamma);
    return 2.0 * horizon * (k_r_sa + 2.0 * gamma * horizon / clamp_count(n_sa));
}

double initial_f0(const PosteriorState& post, double gamma, std::size_t n_probe, Rng& rng,
                  double delta_r) {
    check_gamma(gamma);
    if (n_probe < 1) throw InvalidInputError("n_probe must be >= 1");
    const double prior_mean = post.prior().reward_mean;
    double total = 0.0;
    for (std::size_t i = 0; i < n_probe; ++i) {
        const auto sample = sample_model(post, gamma, rng);
        double gap = 0.0;
        for (double r : sample.mdp.rewards()) gap = std::max(gap, k_r(r, prior_mean));
        total += f_global(gap, gamma, 1, delta_r);
    }
    return total / static_cast<double>(n_probe);
}

} // namespace tseb
