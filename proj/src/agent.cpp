#include "tseb/agent.hpp"

#include "tseb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tseb {

std::string_view to_string(PosteriorCadence cadence) {
    return cadence == PosteriorCadence::per_step ? "per_step" : "per_episode";
}

PosteriorCadence parse_cadence(std::string_view name) {
    if (name == "per_step") return PosteriorCadence::per_step;
    if (name == "per_episode") return PosteriorCadence::per_episode;
    throw InvalidInputError("unknown posterior_cadence '" + std::string(name) +
                            "' (expected per_step or per_episode)");
}

void AgentConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidInputError("lambda must lie in [0, 1], got " + std::to_string(lambda));
    if (horizon < 1) throw InvalidInputError("horizon must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InvalidInputError("gamma must lie in (0, 1), got " + std::to_string(gamma));
    if (!(planner.tolerance > 0.0)) throw InvalidInputError("planner_tol must be > 0");
    if (planner.max_iterations < 1) throw InvalidInputError("planner_max_iter must be >= 1");
    if (!(delta_r >= 0.0) || !std::isfinite(delta_r)) throw InvalidInputError("delta_r must be >= 0");
    if (!(c > 0.0 && c <= 2.0)) throw InvalidInputError("c must lie in (0, 2]");
}

double initial_bonus(double gamma) { return f_state(0.0, gamma, 0); }

TsebAgent::TsebAgent(const AgentConfig& config, PosteriorState posterior)
    : config_(config), posterior_(std::move(posterior)),
      counts_(posterior_.n_states(), posterior_.n_actions()),
      means_(posterior_.n_states(), posterior_.n_actions(), posterior_.prior().reward_mean),
      bonus_(posterior_.n_states(), posterior_.n_actions(), config.bonus_mode,
             initial_bonus(config.gamma)) {
    config_.validate();
}

TsebAgent::TsebAgent(const AgentConfig& config, std::size_t n_states, std::size_t n_actions,
                     const PriorConfig& prior)
    : TsebAgent(config, init_posterior(n_states, n_actions, prior)) {}

namespace {

// Distance between the sampled parameters of (s, a) and their posterior means.
std::vector<double> parameter_distances(const PosteriorState& post, const TabularMdp& sample) {
    std::vector<double> out(post.n_states() * post.n_actions());
    for (std::size_t s = 0; s < post.n_states(); ++s)
        for (std::size_t a = 0; a < post.n_actions(); ++a) {
            double d = std::abs(sample.reward(s, a) - post.reward_mean(s, a));
            const auto mean = post.mean_row(s, a);
            const auto row = sample.row(s, a);
            for (std::size_t k = 0; k < mean.size(); ++k) d += std::abs(row[k] - mean[k]);
            out[s * post.n_actions() + a] = d;
        }
    return out;
}

} // namespace

EpisodeRecord TsebAgent::run_episode(Environment& env, Rng& rng) {
    const std::size_t n_actions = posterior_.n_actions();
    if (env.n_states() != posterior_.n_states() || env.n_actions() != n_actions)
        throw StructuralError("environment dimensions do not match the agent");

    EpisodeRecord record;
    record.episode = episode_;
    record.transitions.reserve(config_.horizon);

    const SampledModel model = sample_model(posterior_, config_.gamma, rng, episode_);
    const TabularMdp& sampled = model.mdp;
    BonusWeights weights{config_.lambda, bonus_.values()};
    PlanResult plan = value_iteration(sampled, weights, config_.planner, warm_start_);
    record.planner_converged = plan.converged;
    record.planner_iterations = plan.iterations;

    std::vector<double> distances;
    if (config_.bonus_mode == BonusMode::param_distance)
        distances = parameter_distances(posterior_, sampled);

    std::size_t s = env.reset();
    for (std::size_t t = 0; t < config_.horizon; ++t) {
        const std::size_t a = greedy_action(sampled, weights, plan.values, s);
        const StepResult step = env.step(a);

        counts_.record(s, a, step.next_state);
        means_.observe(s, a, step.reward);
        const double value = config_.bonus_mode == BonusMode::param_distance
                                 ? distances[s * n_actions + a]
                                 : f_state(k_r(sampled.reward(s, a), means_.mean(s, a)),
                                           config_.gamma, counts_.n_sa(s, a));
        bonus_.update(s, a, value, counts_);
        weights.rho[s * n_actions + a] = bonus_.rho(s, a);

        record.transitions.push_back({s, a, step.next_state, step.reward});
        record.episode_return += step.reward;
        if (config_.cadence == PosteriorCadence::per_step)
            posterior_.update(s, a, step.next_state, step.reward);
        s = step.next_state;
    }
    if (config_.cadence == PosteriorCadence::per_episode)
        for (const auto& tr : record.transitions) posterior_.update(tr.s, tr.a, tr.s_next, tr.r);

    for (std::size_t st = 0; st < posterior_.n_states(); ++st)
        for (std::size_t a = 0; a < n_actions; ++a)
            record.k_r_max = std::max(record.k_r_max, k_r(sampled.reward(st, a), means_.mean(st, a)));
    record.n_min = counts_.n_min();
    record.f_value = f_global(record.k_r_max, config_.gamma, record.n_min, config_.delta_r);

    warm_start_ = std::move(plan.values);
    ++episode_;
    return record;
}

ExperimentResult run_experiment(const EnvFactory& env_factory, const AgentConfig& config,
                                const PriorConfig& prior, std::uint64_t seed,
                                const ExperimentOptions& options) {
    config.validate();
    const Rng root(seed);
    auto env = env_factory(split_seed(seed, 1));
    Rng sampling = root.split(2);

    TsebAgent agent(config, env->n_states(), env->n_actions(), prior);
    const RegretOracle oracle(env->true_mdp(), config.horizon, env->start_state());

    ExperimentResult result{MetricsTrace{}, agent.posterior(), {}};
    for (std::size_t e = 0; e < config.episodes; ++e) {
        EpisodeRecord record = agent.run_episode(*env, sampling);
        result.trace.append({record.episode_return, oracle.regret(record.episode_return),
                             record.f_value,
                             f_bound(record.n_min, config.gamma, config.c, config.delta_r),
                             record.n_min,
                             tau_bound(record.n_min, config.gamma, env->n_states(), env->n_actions(),
                                       config.c),
                             record.k_r_max});
        if (options.keep_transitions)
            result.transitions.insert(result.transitions.end(), record.transitions.begin(),
                                      record.transitions.end());
    }
    result.posterior = agent.posterior();
    return result;
}

} // namespace tseb
