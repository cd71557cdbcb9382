#pragma once

#include "tseb/mdp.hpp"
#include "tseb/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace tseb {

struct StepResult {
    std::size_t next_state;
    double reward;
};

/**
 * Simulated ground-truth environment. Owns its generator, so a given seed
 * always reproduces the same trajectory for the same action sequence.
 */
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    /// Exact transition tensor and mean rewards of the simulator.
    virtual const TabularMdp& true_mdp() const = 0;
    virtual std::size_t start_state() const = 0;

    std::size_t n_states() const { return true_mdp().n_states(); }
    std::size_t n_actions() const { return true_mdp().n_actions(); }
    std::size_t state() const noexcept { return state_; }

    std::size_t reset() { return state_ = start_state(); }
    StepResult step(std::size_t action);

protected:
    explicit Environment(std::uint64_t seed) : rng_(seed) {}
    virtual StepResult simulate(std::size_t state, std::size_t action, Rng& rng) = 0;

private:
    Rng rng_;
    std::size_t state_ = 0;
};

/// Five-state chain. Action 0 ("a") moves right (the last state loops), action 1
/// ("b") returns to the first state; the opposite action is executed with
/// probability 0.2. Acting in the first state pays N(0.2, 0.5) (variance 0.5);
/// elsewhere an executed return pays 0.2 and looping at the end under "a" pays 1.
class ChainWorld final : public Environment {
public:
    static constexpr std::size_t n_chain_states = 5;
    static constexpr double slip_probability = 0.2;
    static constexpr double first_state_mean = 0.2;
    static constexpr double first_state_variance = 0.5;
    static constexpr double return_reward = 0.2;
    static constexpr double loop_reward = 1.0;
    static constexpr double default_discount = 0.8;

    explicit ChainWorld(std::uint64_t seed, double discount = default_discount);

    std::string name() const override { return "chain"; }
    const TabularMdp& true_mdp() const override { return mdp_; }
    std::size_t start_state() const override { return 0; }

    static TabularMdp build_mdp(double discount = default_discount);

protected:
    StepResult simulate(std::size_t state, std::size_t action, Rng& rng) override;

private:
    TabularMdp mdp_;
};

/// Single-server queue with states 0..50 (packets waiting). Action 0 (SLOW)
/// serves a packet w.p. 0.3 at cost 0, action 1 (FAST) w.p. 0.8 at cost 0.25.
/// Each step: service, then a Bernoulli(arrival_prob) arrival (capped at 50).
/// Reward = -action cost + 1 if served - 0.1 * queue length after the step.
class QueuingWorld final : public Environment {
public:
    static constexpr std::size_t capacity = 50;
    static constexpr double slow_service = 0.3;
    static constexpr double fast_service = 0.8;
    static constexpr double fast_cost = 0.25;
    static constexpr double holding_cost = 0.1;
    static constexpr double service_reward = 1.0;
    static constexpr double default_arrival = 0.5;
    static constexpr double default_discount = 0.8;

    QueuingWorld(std::uint64_t seed, double arrival_prob = default_arrival,
                 double discount = default_discount);

    std::string name() const override { return "queuing"; }
    const TabularMdp& true_mdp() const override { return mdp_; }
    std::size_t start_state() const override { return 0; }
    double arrival_prob() const noexcept { return arrival_prob_; }

    /// Reward of one step given the action, whether a packet was served and
    /// the queue length after service and arrival.
    static double outcome_reward(std::size_t action, bool served, std::size_t queue_after);

    static TabularMdp build_mdp(double arrival_prob = default_arrival,
                                double discount = default_discount);

protected:
    StepResult simulate(std::size_t state, std::size_t action, Rng& rng) override;

private:
    double arrival_prob_;
    TabularMdp mdp_;
};

/// Samples an arbitrary TabularMdp: next state from the row, reward equal to
/// the table mean plus optional Gaussian noise.
class TabularEnvironment final : public Environment {
public:
    TabularEnvironment(TabularMdp mdp, std::size_t start, std::uint64_t seed,
                       double reward_noise_stddev = 0.0);

    std::string name() const override { return "tabular"; }
    const TabularMdp& true_mdp() const override { return mdp_; }
    std::size_t start_state() const override { return start_; }

protected:
    StepResult simulate(std::size_t state, std::size_t action, Rng& rng) override;

private:
    TabularMdp mdp_;
    std::size_t start_;
    double noise_;
};

using EnvFactory = std::function<std::unique_ptr<Environment>(std::uint64_t seed)>;

std::unique_ptr<Environment> chain_world(std::uint64_t seed, double discount = ChainWorld::default_discount);

/// Throws InvalidInputError unless arrival_prob lies in [0, 1].
std::unique_ptr<Environment> queuing_world(double arrival_prob, std::uint64_t seed,
                                           double discount = QueuingWorld::default_discount);

struct EnvironmentOptions {
    std::string name = "chain";
    double arrival_prob = QueuingWorld::default_arrival;
    double discount = 0.8;
};

/// Factory for an environment selected by name ("chain" or "queuing").
EnvFactory environment_factory(const EnvironmentOptions& options);

} // namespace tseb
