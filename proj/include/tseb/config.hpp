#pragma once

#include "tseb/agent.hpp"
#include "tseb/bonus.hpp"
#include "tseb/envs.hpp"
#include "tseb/errors.hpp"
#include "tseb/metrics.hpp"
#include "tseb/posterior.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tseb {

/// Raised for any invalid or unknown configuration field; the message names
/// the field.
class ConfigError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// Everything needed to reproduce a run or a sweep. Fields left out of a
/// config file take the defaults of the selected environment.
struct ExperimentConfig {
    std::string env = "chain";
    double lambda = 0.5;
    std::vector<double> lambdas;
    std::size_t episodes = 1000;
    std::size_t horizon = 100;
    double gamma = 0.8;
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    BonusMode bonus_mode = BonusMode::recurrence;
    PosteriorCadence cadence = PosteriorCadence::per_episode;
    double arrival_prob = QueuingWorld::default_arrival;
    PriorConfig prior;
    double delta_r = 2.0;
    double c = 2.0;
    double planner_tol = 1e-8;
    std::size_t planner_max_iter = 10'000;
    double pac_epsilon = 0.1;
    double pac_delta = 0.05;
    std::size_t f0_probes = 1000;
    std::string output_dir = "results";
    /// Worker threads for sweeps; 0 = hardware concurrency.
    std::size_t threads = 0;

    /// Defaults for an environment ("chain" or "queuing").
    static ExperimentConfig defaults_for(const std::string& env);

    AgentConfig agent_config(double lambda_value) const;
    AgentConfig agent_config() const { return agent_config(lambda); }
    EnvironmentOptions environment_options() const { return {env, arrival_prob, gamma}; }

    /// Throws ConfigError naming the first invalid field.
    void validate() const;

    nlohmann::json to_json() const;
    /// Defaults of j["env"] (or chain), then every key of `j` applied on top.
    /// Unknown keys are rejected.
    static ExperimentConfig from_json(const nlohmann::json& j);

    bool operator==(const ExperimentConfig&) const = default;
};

/// Seed of run `index` within a run or sweep started from `seed`.
std::uint64_t run_seed(std::uint64_t seed, std::size_t index);

} // namespace tseb
