#include "tseb/envs.hpp"

#include "tseb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tseb {

StepResult Environment::step(std::size_t action) {
    if (action >= n_actions())
        throw StructuralError("action " + std::to_string(action) + " out of range for " + name());
    const StepResult result = simulate(state_, action, rng_);
    state_ = result.next_state;
    return result;
}

// ---- chain ----------------------------------------------------------------

namespace {

constexpr std::size_t chain_move(std::size_t state, std::size_t executed) {
    if (executed == 1) return 0;
    return std::min(state + 1, ChainWorld::n_chain_states - 1);
}

// Mean reward of an executed move; the first state is handled separately.
constexpr double chain_move_reward(std::size_t state, std::size_t executed) {
    if (executed == 1) return ChainWorld::return_reward;
    return state == ChainWorld::n_chain_states - 1 ? ChainWorld::loop_reward : 0.0;
}

} // namespace

ChainWorld::ChainWorld(std::uint64_t seed, double discount)
    : Environment(seed), mdp_(build_mdp(discount)) {
    reset();
}

TabularMdp ChainWorld::build_mdp(double discount) {
    constexpr std::size_t S = n_chain_states;
    constexpr std::size_t A = 2;
    std::vector<double> transition(S * A * S, 0.0);
    std::vector<double> reward(S * A, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            for (const auto& [executed, p] : {std::pair{a, 1.0 - slip_probability},
                                              std::pair{1 - a, slip_probability}}) {
                transition[(s * A + a) * S + chain_move(s, executed)] += p;
                reward[s * A + a] += p * (s == 0 ? first_state_mean : chain_move_reward(s, executed));
            }
        }
    }
    // realized rewards are Gaussian in the first state; use the normalized span
    return TabularMdp(S, A, std::move(transition), std::move(reward), discount, 2.0);
}

StepResult ChainWorld::simulate(std::size_t state, std::size_t action, Rng& rng) {
    const std::size_t executed = rng.uniform() < slip_probability ? 1 - action : action;
    const std::size_t next = chain_move(state, executed);
    const double reward = state == 0 ? rng.normal(first_state_mean, std::sqrt(first_state_variance))
                                     : chain_move_reward(state, executed);
    return {next, reward};
}

// ---- queuing --------------------------------------------------------------

namespace {

double service_probability(std::size_t action) {
    return action == 1 ? QueuingWorld::fast_service : QueuingWorld::slow_service;
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidInputError("arrival_prob must lie in [0, 1], got " + std::to_string(p));
}

} // namespace

double QueuingWorld::outcome_reward(std::size_t action, bool served, std::size_t queue_after) {
    const double cost = action == 1 ? fast_cost : 0.0;
    return -cost + (served ? service_reward : 0.0) - holding_cost * static_cast<double>(queue_after);
}

QueuingWorld::QueuingWorld(std::uint64_t seed, double arrival_prob, double discount)
    : Environment(seed), arrival_prob_(arrival_prob), mdp_(build_mdp(arrival_prob, discount)) {
    reset();
}

TabularMdp QueuingWorld::build_mdp(double arrival_prob, double discount) {
    check_probability(arrival_prob);
    constexpr std::size_t S = capacity + 1;
    constexpr std::size_t A = 2;
    std::vector<double> transition(S * A * S, 0.0);
    std::vector<double> reward(S * A, 0.0);
    for (std::size_t q = 0; q < S; ++q) {
        for (std::size_t a = 0; a < A; ++a) {
            const double mu = q > 0 ? service_probability(a) : 0.0;
            for (const auto& [served, p_service] : {std::pair{true, mu}, std::pair{false, 1.0 - mu}}) {
                if (p_service == 0.0) continue;
                const std::size_t after_service = served ? q - 1 : q;
                for (const auto& [arrived, p_arrival] :
                     {std::pair{true, arrival_prob}, std::pair{false, 1.0 - arrival_prob}}) {
                    if (p_arrival == 0.0) continue;
                    const std::size_t next = std::min(after_service + (arrived ? 1 : 0), capacity);
                    const double p = p_service * p_arrival;
                    transition[(q * A + a) * S + next] += p;
                    reward[q * A + a] += p * QueuingWorld::outcome_reward(a, served, next);
                }
            }
        }
    }
    // realized rewards range from -fast_cost - holding * capacity to +service_reward
    const double span = service_reward + fast_cost + holding_cost * static_cast<double>(capacity);
    return TabularMdp(S, A, std::move(transition), std::move(reward), discount, span);
}

StepResult QueuingWorld::simulate(std::size_t state, std::size_t action, Rng& rng) {
    const bool served = state > 0 && rng.uniform() < service_probability(action);
    std::size_t next = served ? state - 1 : state;
    if (rng.uniform() < arrival_prob_) next = std::min(next + 1, capacity);
    return {next, QueuingWorld::outcome_reward(action, served, next)};
}

// ---- generic --------------------------------------------------------------

TabularEnvironment::TabularEnvironment(TabularMdp mdp, std::size_t start, std::uint64_t seed,
                                       double reward_noise_stddev)
    : Environment(seed), mdp_(std::move(mdp)), start_(start), noise_(reward_noise_stddev) {
    if (start_ >= mdp_.n_states()) throw StructuralError("start state out of range");
    if (!(noise_ >= 0.0)) throw InvalidInputError("reward noise must be >= 0");
    reset();
}

StepResult TabularEnvironment::simulate(std::size_t state, std::size_t action, Rng& rng) {
    const auto row = mdp_.row(state, action);
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t next = row.size() - 1;
    for (std::size_t k = 0; k < row.size(); ++k) {
        cumulative += row[k];
        if (u < cumulative) {
            next = k;
            break;
        }
    }
    const double mean = mdp_.reward(state, action);
    return {next, noise_ > 0.0 ? rng.normal(mean, noise_) : mean};
}

std::unique_ptr<Environment> chain_world(std::uint64_t seed, double discount) {
    return std::make_unique<ChainWorld>(seed, discount);
}

std::unique_ptr<Environment> queuing_world(double arrival_prob, std::uint64_t seed, double discount) {
    check_probability(arrival_prob);
    return std::make_unique<QueuingWorld>(seed, arrival_prob, discount);
}

EnvFactory environment_factory(const EnvironmentOptions& options) {
    if (options.name == "chain") {
        const double discount = options.discount;
        ChainWorld::build_mdp(discount); // validate eagerly
        return [discount](std::uint64_t seed) { return chain_world(seed, discount); };
    }
    if (options.name == "queuing") {
        const double arrival = options.arrival_prob;
        const double discount = options.discount;
        QueuingWorld::build_mdp(arrival, discount);
        return [arrival, discount](std::uint64_t seed) { return queuing_world(arrival, seed, discount); };
    }
    throw InvalidInputError("unknown env '" + options.name + "' (expected chain or queuing)");
}

} // namespace tseb
