#include "tseb/config.hpp"

#include <cmath>
#include <set>

namespace tseb {

namespace {

std::vector<double> default_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

template <typename T>
T field(const nlohmann::json& j, const char* name) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("invalid value for field '") + name + "': " + j.dump());
    }
}

std::size_t count_field(const nlohmann::json& j, const char* name) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError(std::string("field '") + name + "' must be a non-negative integer, got " + j.dump());
    return j.get<std::size_t>();
}

} // namespace

ExperimentConfig ExperimentConfig::defaults_for(const std::string& env) {
    ExperimentConfig config;
    config.env = env;
    config.lambdas = default_grid();
    if (env == "chain") {
        config.episodes = 1000;
        config.horizon = 100;
        config.prior.reward_lo = -1.0;
        config.prior.reward_hi = 1.0;
        config.delta_r = 2.0;
    } else if (env == "queuing") {
        config.episodes = 500;
        config.horizon = 200;
        config.prior.reward_lo = -6.35;
        config.prior.reward_hi = 1.0;
        config.delta_r = QueuingWorld::build_mdp().reward_range();
    } else {
        throw ConfigError("invalid env '" + env + "' (expected chain or queuing)");
    }
    return config;
}

AgentConfig ExperimentConfig::agent_config(double lambda_value) const {
    AgentConfig agent;
    agent.lambda = lambda_value;
    agent.episodes = episodes;
    agent.horizon = horizon;
    agent.gamma = gamma;
    agent.bonus_mode = bonus_mode;
    agent.planner = {planner_tol, planner_max_iter};
    agent.cadence = cadence;
    agent.delta_r = delta_r;
    agent.c = c;
    return agent;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& name, const std::string& why) {
        throw ConfigError("invalid " + name + ": " + why);
    };
    if (env != "chain" && env != "queuing") fail("env", "'" + env + "' (expected chain or queuing)");
    if (!(lambda >= 0.0 && lambda <= 1.0)) fail("lambda", std::to_string(lambda) + " is outside [0, 1]");
    if (lambdas.empty()) fail("lambdas", "grid is empty");
    for (double l : lambdas)
        if (!(l >= 0.0 && l <= 1.0)) fail("lambdas", std::to_string(l) + " is outside [0, 1]");
    if (horizon < 1) fail("horizon", "must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma", std::to_string(gamma) + " is outside (0, 1)");
    if (runs < 1) fail("runs", "must be >= 1");
    if (!(arrival_prob >= 0.0 && arrival_prob <= 1.0))
        fail("arrival_prob", std::to_string(arrival_prob) + " is outside [0, 1]");
    if (!(prior.dirichlet_alpha > 0.0)) fail("prior.dirichlet_alpha", "must be > 0");
    if (!(prior.reward_precision > 0.0)) fail("prior.reward_precision", "must be > 0");
    if (!(prior.obs_noise_variance > 0.0)) fail("prior.obs_noise_variance", "must be > 0");
    if (!std::isfinite(prior.reward_mean)) fail("prior.reward_mean", "must be finite");
    if (!(prior.reward_lo <= prior.reward_hi)) fail("reward_bounds", "lower bound exceeds upper bound");
    if (!(delta_r >= 0.0)) fail("delta_r", "must be >= 0");
    if (!(c > 0.0 && c <= 2.0)) fail("c", "must lie in (0, 2]");
    if (!(planner_tol > 0.0)) fail("planner_tol", "must be > 0");
    if (planner_max_iter < 1) fail("planner_max_iter", "must be >= 1");
    if (!(pac_epsilon > 0.0)) fail("pac_epsilon", "must be > 0");
    if (!(pac_delta > 0.0 && pac_delta < 1.0)) fail("pac_delta", "must lie in (0, 1)");
    if (f0_probes < 1) fail("f0_probes", "must be >= 1");
    if (output_dir.empty()) fail("output_dir", "must not be empty");
}

nlohmann::json ExperimentConfig::to_json() const {
    return {
        {"env", env},
        {"lambda", lambda},
        {"lambdas", lambdas},
        {"episodes", episodes},
        {"horizon", horizon},
        {"gamma", gamma},
        {"seed", seed},
        {"runs", runs},
        {"bonus_mode", std::string(to_string(bonus_mode))},
        {"posterior_cadence", std::string(to_string(cadence))},
        {"arrival_prob", arrival_prob},
        {"prior",
         {{"dirichlet_alpha", prior.dirichlet_alpha},
          {"reward_mean", prior.reward_mean},
          {"reward_precision", prior.reward_precision},
          {"obs_noise_variance", prior.obs_noise_variance}}},
        {"reward_bounds", {prior.reward_lo, prior.reward_hi}},
        {"delta_r", delta_r},
        {"c", c},
        {"planner_tol", planner_tol},
        {"planner_max_iter", planner_max_iter},
        {"pac_epsilon", pac_epsilon},
        {"pac_delta", pac_delta},
        {"f0_probes", f0_probes},
        {"output_dir", output_dir},
        {"threads", threads},
    };
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const std::string env = j.contains("env") ? field<std::string>(j["env"], "env") : "chain";
    ExperimentConfig config = defaults_for(env);

    for (const auto& [key, value] : j.items()) {
        if (key == "env") continue;
        else if (key == "lambda") config.lambda = field<double>(value, "lambda");
        else if (key == "lambdas") config.lambdas = field<std::vector<double>>(value, "lambdas");
        else if (key == "episodes") config.episodes = count_field(value, "episodes");
        else if (key == "horizon") config.horizon = count_field(value, "horizon");
        else if (key == "gamma") config.gamma = field<double>(value, "gamma");
        else if (key == "seed") config.seed = field<std::uint64_t>(value, "seed");
        else if (key == "runs") config.runs = count_field(value, "runs");
        else if (key == "bonus_mode") {
            try {
                config.bonus_mode = parse_bonus_mode(field<std::string>(value, "bonus_mode"));
            } catch (const ConfigError&) {
                throw;
            } catch (const InvalidInputError& e) {
                throw ConfigError(std::string("invalid bonus_mode: ") + e.what());
            }
        } else if (key == "posterior_cadence") {
            try {
                config.cadence = parse_cadence(field<std::string>(value, "posterior_cadence"));
            } catch (const ConfigError&) {
                throw;
            } catch (const InvalidInputError& e) {
                throw ConfigError(std::string("invalid posterior_cadence: ") + e.what());
            }
        } else if (key == "arrival_prob") config.arrival_prob = field<double>(value, "arrival_prob");
        else if (key == "prior") {
            if (!value.is_object()) throw ConfigError("field 'prior' must be an object");
            for (const auto& [pk, pv] : value.items()) {
                if (pk == "dirichlet_alpha") config.prior.dirichlet_alpha = field<double>(pv, "prior.dirichlet_alpha");
                else if (pk == "reward_mean") config.prior.reward_mean = field<double>(pv, "prior.reward_mean");
                else if (pk == "reward_precision") config.prior.reward_precision = field<double>(pv, "prior.reward_precision");
                else if (pk == "obs_noise_variance") config.prior.obs_noise_variance = field<double>(pv, "prior.obs_noise_variance");
                else throw ConfigError("unknown field 'prior." + pk + "'");
            }
        } else if (key == "reward_bounds") {
            const auto bounds = field<std::vector<double>>(value, "reward_bounds");
            if (bounds.size() != 2) throw ConfigError("field 'reward_bounds' must be [lo, hi]");
            config.prior.reward_lo = bounds[0];
            config.prior.reward_hi = bounds[1];
        } else if (key == "delta_r") config.delta_r = field<double>(value, "delta_r");
        else if (key == "c") config.c = field<double>(value, "c");
        else if (key == "planner_tol") config.planner_tol = field<double>(value, "planner_tol");
        else if (key == "planner_max_iter") config.planner_max_iter = count_field(value, "planner_max_iter");
        else if (key == "pac_epsilon") config.pac_epsilon = field<double>(value, "pac_epsilon");
        else if (key == "pac_delta") config.pac_delta = field<double>(value, "pac_delta");
        else if (key == "f0_probes") config.f0_probes = count_field(value, "f0_probes");
        else if (key == "output_dir") config.output_dir = field<std::string>(value, "output_dir");
        else if (key == "threads") config.threads = count_field(value, "threads");
        else throw ConfigError("unknown field '" + key + "'");
    }
    config.validate();
    return config;
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t index) { return split_seed(seed, 1000 + index); }

} // namespace tseb
