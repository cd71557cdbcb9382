// Test-only reference computations. Deliberately independent of the library's
// planners: own linear solver, exhaustive policy enumeration.
#pragma once

#include "tseb/mdp.hpp"
#include "tseb/rng.hpp"

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

/// Solves A x = b by Gaussian elimination with partial pivoting (A dense, n x n).
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Value of a deterministic policy under effective reward
/// lambda R + (1 - lambda) rho.
inline std::vector<double> evaluate(const tseb::TabularMdp& mdp, const std::vector<std::size_t>& policy,
                                    double lambda = 1.0, const std::vector<double>& rho = {}) {
    const std::size_t n = mdp.n_states();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t act = policy[s];
        a[s][s] = 1.0;
        for (std::size_t k = 0; k < n; ++k) a[s][k] -= mdp.discount() * mdp.probability(s, act, k);
        const double bonus = rho.empty() ? 0.0 : rho[s * mdp.n_actions() + act];
        b[s] = lambda * mdp.reward(s, act) + (1.0 - lambda) * bonus;
    }
    return solve(a, b);
}

/// Optimal values by enumerating every deterministic policy and taking the
/// elementwise maximum (an optimal policy dominates in every state).
inline std::vector<double> brute_force_optimal(const tseb::TabularMdp& mdp, double lambda = 1.0,
                                               const std::vector<double>& rho = {}) {
    const std::size_t n = mdp.n_states();
    std::vector<std::size_t> policy(n, 0);
    std::vector<double> best(n, -1e300);
    while (true) {
        const auto v = evaluate(mdp, policy, lambda, rho);
        for (std::size_t s = 0; s < n; ++s) best[s] = std::max(best[s], v[s]);
        std::size_t i = 0;
        while (i < n && ++policy[i] == mdp.n_actions()) policy[i++] = 0;
        if (i == n) break;
    }
    return best;
}

/// Random dense MDP: rows from normalized uniforms, rewards uniform in [-1, 1].
inline tseb::TabularMdp random_mdp(std::size_t n_states, std::size_t n_actions, double discount,
                                   std::uint64_t seed) {
    tseb::Rng rng(seed);
    std::vector<double> p(n_states * n_actions * n_states);
    std::vector<double> r(n_states * n_actions);
    for (std::size_t sa = 0; sa < n_states * n_actions; ++sa) {
        double total = 0.0;
        for (std::size_t k = 0; k < n_states; ++k) total += p[sa * n_states + k] = rng.uniform() + 1e-3;
        for (std::size_t k = 0; k < n_states; ++k) p[sa * n_states + k] /= total;
        r[sa] = 2.0 * rng.uniform() - 1.0;
    }
    return tseb::TabularMdp(n_states, n_actions, std::move(p), std::move(r), discount, 2.0);
}

inline double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace oracle
