#include "tseb/posterior.hpp"

#include "tseb/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace tseb {

void PriorConfig::validate() const {
    if (!(dirichlet_alpha > 0.0) || !std::isfinite(dirichlet_alpha))
        throw InvalidInputError("prior dirichlet_alpha must be > 0");
    if (!(reward_precision > 0.0) || !std::isfinite(reward_precision))
        throw InvalidInputError("prior reward_precision must be > 0");
    if (!(obs_noise_variance > 0.0) || !std::isfinite(obs_noise_variance))
        throw InvalidInputError("obs_noise_variance must be > 0");
    if (!std::isfinite(reward_mean)) throw InvalidInputError("prior reward_mean must be finite");
    if (!(reward_lo <= reward_hi) || !std::isfinite(reward_lo) || !std::isfinite(reward_hi))
        throw InvalidInputError("reward bounds must be finite with lo <= hi");
}

PosteriorState::PosteriorState(std::size_t n_states, std::size_t n_actions, const PriorConfig& prior)
    : n_states_(n_states), n_actions_(n_actions), prior_(prior) {
    if (n_states == 0 || n_actions == 0)
        throw StructuralError("posterior needs at least one state and one action");
    prior_.validate();
    alpha_.assign(n_states * n_actions * n_states, prior.dirichlet_alpha);
    reward_mean_.assign(n_states * n_actions, prior.reward_mean);
    reward_precision_.assign(n_states * n_actions, prior.reward_precision);
    observations_.assign(n_states * n_actions, 0);
}

PosteriorState::PosteriorState(std::size_t n_states, std::size_t n_actions, const PriorConfig& prior,
                               std::vector<double> alpha, std::vector<double> reward_mean,
                               std::vector<double> reward_precision)
    : PosteriorState(n_states, n_actions, prior) {
    if (alpha.size() != alpha_.size() || reward_mean.size() != reward_mean_.size() ||
        reward_precision.size() != reward_precision_.size())
        throw StructuralError("posterior component sizes do not match dimensions");
    for (double x : alpha)
        if (!(x >= prior.dirichlet_alpha) || !std::isfinite(x))
            throw InvalidInputError("dirichlet alpha below the prior concentration");
    for (double x : reward_mean)
        if (!std::isfinite(x)) throw InvalidInputError("reward mean must be finite");
    for (double x : reward_precision)
        if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInputError("reward precision must be > 0");
    alpha_ = std::move(alpha);
    reward_mean_ = std::move(reward_mean);
    reward_precision_ = std::move(reward_precision);
}

void PosteriorState::check_pair(std::size_t s, std::size_t a) const {
    if (s >= n_states_ || a >= n_actions_)
        throw StructuralError("state-action (" + std::to_string(s) + ", " + std::to_string(a) +
                              ") out of range");
}

std::vector<double> PosteriorState::mean_row(std::size_t s, std::size_t a) const {
    check_pair(s, a);
    const auto first = alpha_.begin() + static_cast<std::ptrdiff_t>((s * n_actions_ + a) * n_states_);
    std::vector<double> row(first, first + static_cast<std::ptrdiff_t>(n_states_));
    double total = 0.0;
    for (double x : row) total += x;
    for (double& x : row) x /= total;
    return row;
}

void PosteriorState::update(std::size_t s, std::size_t a, std::size_t s_next, double reward) {
    check_pair(s, a);
    if (s_next >= n_states_) throw StructuralError("next state " + std::to_string(s_next) + " out of range");
    if (!std::isfinite(reward)) throw InvalidInputError("observed reward must be finite");

    const std::size_t sa = s * n_actions_ + a;
    alpha_[sa * n_states_ + s_next] += 1.0;
    ++observations_[sa];

    const double obs_precision = 1.0 / prior_.obs_noise_variance;
    const double precision = reward_precision_[sa] + obs_precision;
    reward_mean_[sa] = (reward_precision_[sa] * reward_mean_[sa] + obs_precision * reward) / precision;
    reward_precision_[sa] = precision;
}

std::string PosteriorState::serialize() const {
    nlohmann::json j;
    j["n_states"] = n_states_;
    j["n_actions"] = n_actions_;
    j["prior"] = {{"dirichlet_alpha", prior_.dirichlet_alpha},
                  {"reward_mean", prior_.reward_mean},
                  {"reward_precision", prior_.reward_precision},
                  {"obs_noise_variance", prior_.obs_noise_variance},
                  {"reward_lo", prior_.reward_lo},
                  {"reward_hi", prior_.reward_hi}};
    j["dirichlet_alpha"] = alpha_;
    j["reward_mean"] = reward_mean_;
    j["reward_precision"] = reward_precision_;
    j["observations"] = observations_;
    return j.dump(1);
}

PosteriorState PosteriorState::parse(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        PriorConfig prior;
        const auto& p = j.at("prior");
        prior.dirichlet_alpha = p.at("dirichlet_alpha").get<double>();
        prior.reward_mean = p.at("reward_mean").get<double>();
        prior.reward_precision = p.at("reward_precision").get<double>();
        prior.obs_noise_variance = p.at("obs_noise_variance").get<double>();
        prior.reward_lo = p.at("reward_lo").get<double>();
        prior.reward_hi = p.at("reward_hi").get<double>();

        PosteriorState post(j.at("n_states").get<std::size_t>(), j.at("n_actions").get<std::size_t>(),
                            prior, j.at("dirichlet_alpha").get<std::vector<double>>(),
                            j.at("reward_mean").get<std::vector<double>>(),
                            j.at("reward_precision").get<std::vector<double>>());
        auto observations = j.at("observations").get<std::vector<std::size_t>>();
        if (observations.size() != post.observations_.size())
            throw StructuralError("observation counts do not match dimensions");
        post.observations_ = std::move(observations);
        return post;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("malformed posterior snapshot: ") + e.what());
    }
}

PosteriorState init_posterior(std::size_t n_states, std::size_t n_actions, const PriorConfig& prior) {
    return PosteriorState(n_states, n_actions, prior);
}

PosteriorState update_posterior(PosteriorState post, std::size_t s, std::size_t a,
                                std::size_t s_next, double reward) {
    post.update(s, a, s_next, reward);
    return post;
}

SampledModel sample_model(const PosteriorState& post, double discount, Rng& rng,
                          std::size_t episode_index) {
    const std::size_t n_states = post.n_states();
    const std::size_t n_actions = post.n_actions();
    const PriorConfig& prior = post.prior();

    std::vector<double> transition(n_states * n_actions * n_states);
    std::vector<double> reward(n_states * n_actions);
    for (std::size_t s = 0; s < n_states; ++s) {
        for (std::size_t a = 0; a < n_actions; ++a) {
            double* row = transition.data() + (s * n_actions + a) * n_states;
            double total = 0.0;
            for (std::size_t k = 0; k < n_states; ++k) {
                row[k] = rng.gamma(post.alpha(s, a, k));
                total += row[k];
            }
            if (total > 0.0) {
                for (std::size_t k = 0; k < n_states; ++k) row[k] /= total;
            } else {
                // every variate underflowed; only possible for tiny alphas
                const auto mean = post.mean_row(s, a);
                std::copy(mean.begin(), mean.end(), row);
            }

            const double draw =
                rng.normal(post.reward_mean(s, a), 1.0 / std::sqrt(post.reward_precision(s, a)));
            reward[s * n_actions + a] = std::clamp(draw, prior.reward_lo, prior.reward_hi);
        }
    }
    return {TabularMdp(n_states, n_actions, std::move(transition), std::move(reward), discount,
                       prior.reward_hi - prior.reward_lo),
            episode_index};
}

TabularMdp expected_model(const PosteriorState& post, double discount) {
    const std::size_t n_states = post.n_states();
    const std::size_t n_actions = post.n_actions();
    std::vector<double> transition;
    transition.reserve(n_states * n_actions * n_states);
    std::vector<double> reward(n_states * n_actions);
    for (std::size_t s = 0; s < n_states; ++s)
        for (std::size_t a = 0; a < n_actions; ++a) {
            const auto row = post.mean_row(s, a);
            transition.insert(transition.end(), row.begin(), row.end());
            reward[s * n_actions + a] = post.reward_mean(s, a);
        }
    const auto [lo, hi] = std::minmax_element(reward.begin(), reward.end());
    const double span = std::max(post.prior().reward_hi - post.prior().reward_lo, *hi - *lo);
    return TabularMdp(n_states, n_actions, std::move(transition), std::move(reward), discount, span);
}

} // namespace tseb
