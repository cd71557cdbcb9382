#include "tseb/agent.hpp"
#include "tseb/bonus.hpp"
#include "tseb/envs.hpp"
#include "tseb/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace tseb;

namespace {

// Independent evaluation of the value-gap expression with a general reward span.
double f_oracle(double k, double g, double n, double delta_r) {
    const double lead = 2.0 / (1.0 - g);
    return lead * (k + g / (1.0 - g) * delta_r / n);
}

} // namespace

TEST_CASE("k_r") {
    CHECK(k_r(0.5, 0.5) == 0.0);
    CHECK(k_r(0.9, 0.2) == doctest::Approx(0.7));
    CHECK(k_r(-0.3, 0.4) == doctest::Approx(0.7));
}

TEST_CASE("f_global") {
    CHECK(f_global(0.1, 0.8, 10) == doctest::Approx(f_oracle(0.1, 0.8, 10, 2.0)));
    CHECK(f_global(0.1, 0.8, 10) == doctest::Approx(9.0));
    CHECK(f_global(1.0, 0.5, 1) == doctest::Approx(12.0));
    CHECK(f_global(0.0, 0.5, 1'000'000'000) < 1e-8);
    CHECK(f_global(0.3, 0.9, 7, 6.25) == doctest::Approx(f_oracle(0.3, 0.9, 7, 6.25)));
    // zero count is clamped to one
    CHECK(f_global(0.2, 0.8, 0) == f_global(0.2, 0.8, 1));

    CHECK_THROWS_AS(f_global(0.1, 1.0, 1), InvalidInputError);
    CHECK_THROWS_AS(f_global(0.1, 0.0, 1), InvalidInputError);
    CHECK_THROWS_AS(f_global(0.1, 0.5, 1, -1.0), InvalidInputError);
}

TEST_CASE("f_state") {
    CHECK(f_state(0.1, 0.8, 10) == doctest::Approx(9.0));
    CHECK(f_state(0.0, 0.8, 1'000'000'000) < 1e-6);
    CHECK_THROWS_AS(f_state(0.1, 1.5, 3), InvalidInputError);

    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double k = rng.uniform() * 3.0;
        const double g = 0.01 + 0.98 * rng.uniform();
        const std::uint64_t n = 1 + rng() % 1000;
        CHECK(f_state(k, g, n) == doctest::Approx(f_global(k, g, n, 2.0)).epsilon(1e-14));
    }
}

TEST_CASE("f-functions are monotone") {
    Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        const double k = rng.uniform();
        const double g = 0.05 + 0.9 * rng.uniform();
        const std::uint64_t n = 1 + rng() % 500;
        CHECK(f_global(k, g, n + 1) < f_global(k, g, n));
        CHECK(f_state(k, g, n + 1) < f_state(k, g, n));
        CHECK(f_global(k + 0.01, g, n) > f_global(k, g, n));
        CHECK(f_state(k + 0.01, g, n) > f_state(k, g, n));
    }
}

TEST_CASE("update_rho") {
    CountTable counts(2, 2);

    SUBCASE("recurrence") {
        BonusTable bonus(2, 2, BonusMode::recurrence);
        CHECK_THROWS_AS(update_rho(bonus, 0, 0, 9.0, counts), ContractViolation);
        counts.record(0, 0, 1);
        update_rho(bonus, 0, 0, 9.0, counts);
        CHECK(bonus.rho(0, 0) == doctest::Approx(9.0));
        for (int i = 0; i < 9; ++i) counts.record(0, 0, 1);
        update_rho(bonus, 0, 0, 1.0, counts);
        CHECK(bonus.rho(0, 0) == doctest::Approx(1.0));
        CHECK(bonus.rho(1, 1) == 0.0);
    }

    SUBCASE("direct") {
        BonusTable bonus(2, 2, BonusMode::direct, 3.0);
        for (int i = 0; i < 5; ++i) counts.record(1, 0, 0);
        update_rho(bonus, 1, 0, 5.0, counts);
        CHECK(bonus.rho(1, 0) == doctest::Approx(1.0));
        CHECK(bonus.rho(0, 0) == 3.0);
    }

    SUBCASE("param_distance averages the accumulated distances") {
        BonusTable bonus(2, 2, BonusMode::param_distance);
        counts.record(0, 1, 0);
        update_rho(bonus, 0, 1, 0.6, counts);
        CHECK(bonus.rho(0, 1) == doctest::Approx(0.6));
        counts.record(0, 1, 0);
        update_rho(bonus, 0, 1, 0.2, counts);
        CHECK(bonus.rho(0, 1) == doctest::Approx(0.4));
    }

    SUBCASE("bad values") {
        BonusTable bonus(2, 2, BonusMode::recurrence);
        counts.record(0, 0, 0);
        CHECK_THROWS_AS(update_rho(bonus, 0, 0, -1.0, counts), InvalidInputError);
        CHECK_THROWS_AS(update_rho(bonus, 0, 0, std::nan(""), counts), InvalidInputError);
        CHECK_THROWS_AS(update_rho(bonus, 2, 0, 1.0, counts), StructuralError);
        CHECK_THROWS_AS(BonusTable(2, 2, BonusMode::direct, -1.0), InvalidInputError);
    }
}

TEST_CASE("direct mode tracks f_state exactly") {
    CountTable counts(3, 2);
    BonusTable bonus(3, 2, BonusMode::direct);
    Rng rng(31);
    double previous = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 300; ++i) {
        const std::size_t s = rng() % 3, a = rng() % 2;
        counts.record(s, a, rng() % 3);
        const double f = f_state(rng.uniform(), 0.8, counts.n_sa(s, a));
        update_rho(bonus, s, a, f, counts);
        CHECK(bonus.rho(s, a) * double(counts.n_sa(s, a)) == doctest::Approx(f).epsilon(1e-14));
        for (double r : bonus.values()) {
            CHECK(r >= 0.0);
            CHECK(std::isfinite(r));
        }
    }
    // fixed K_r: nonincreasing in n
    CountTable c(1, 1);
    BonusTable b(1, 1, BonusMode::direct);
    for (int n = 1; n <= 50; ++n) {
        c.record(0, 0, 0);
        update_rho(b, 0, 0, f_state(0.3, 0.8, c.n_sa(0, 0)), c);
        CHECK(b.rho(0, 0) <= previous);
        previous = b.rho(0, 0);
    }
}

TEST_CASE("running means equal the batch mean") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> noise(0.3, 2.0);
    std::vector<double> xs(1000);
    for (double& x : xs) x = noise(gen);
    for (int rep = 0; rep < 1000; ++rep) {
        std::shuffle(xs.begin(), xs.end(), gen);
        RunningMeans means(1, 1);
        for (double x : xs) means.observe(0, 0, x);
        double batch = 0.0;
        for (double x : xs) batch += x;
        batch /= double(xs.size());
        CHECK(std::abs(means.mean(0, 0) - batch) <= 1e-12);
    }
    RunningMeans fresh(2, 2, 0.7);
    CHECK(fresh.mean(1, 1) == 0.7);
    CHECK(fresh.count(1, 1) == 0);
}

TEST_CASE("count table") {
    CountTable counts(3, 2);
    CHECK(counts.n_min() == 0);
    Rng rng(8);
    std::uint64_t last_min = 0;
    for (int i = 0; i < 500; ++i) {
        counts.record(rng() % 3, rng() % 2, rng() % 3);
        CHECK(counts.n_min() >= last_min);
        last_min = counts.n_min();
    }
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        std::uint64_t row = 0;
        for (std::size_t a = 0; a < 2; ++a) {
            std::uint64_t sas = 0;
            for (std::size_t k = 0; k < 3; ++k) sas += counts.n_sas(s, a, k);
            CHECK(sas == counts.n_sa(s, a));
            row += counts.n_sa(s, a);
        }
        CHECK(row == counts.n_s(s));
        total += row;
    }
    CHECK(total == counts.total());
    CHECK_THROWS_AS(counts.record(3, 0, 0), StructuralError);
}

TEST_CASE("bonus mode names") {
    for (auto m : {BonusMode::recurrence, BonusMode::direct, BonusMode::param_distance})
        CHECK(parse_bonus_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_bonus_mode("bogus"), InvalidInputError);
}

TEST_CASE("initial_f0") {
    SUBCASE("degenerate prior keeps only the count term") {
        PriorConfig sharp;
        sharp.reward_precision = 1e14;
        sharp.dirichlet_alpha = 1e6;
        const auto post = init_posterior(3, 2, sharp);
        Rng rng(2);
        const double f0 = initial_f0(post, 0.8, 200, rng);
        CHECK(f0 == doctest::Approx(2.0 / 0.2 * (2.0 * 0.8 / 0.2)).epsilon(1e-5));
    }

    SUBCASE("determinism") {
        const auto post = init_posterior(5, 2, PriorConfig{});
        Rng a(77), b(77);
        CHECK(initial_f0(post, 0.8, 1, a) == initial_f0(post, 0.8, 1, b));
        CHECK_THROWS_AS(initial_f0(post, 0.8, 0, a), InvalidInputError);
    }

    SUBCASE("Monte-Carlo self-consistency") {
        const auto post = init_posterior(5, 2, PriorConfig{});
        const double gamma = 0.8;
        // per-probe spread, measured independently
        Rng spread_rng(100);
        std::vector<double> probes(2000);
        for (double& p : probes) p = initial_f0(post, gamma, 1, spread_rng);
        const double mean = std::accumulate(probes.begin(), probes.end(), 0.0) / probes.size();
        double var = 0.0;
        for (double p : probes) var += (p - mean) * (p - mean);
        var /= double(probes.size() - 1);

        Rng small_rng(1), large_rng(2);
        const double small = initial_f0(post, gamma, 10'000, small_rng);
        const double large = initial_f0(post, gamma, 100'000, large_rng);
        const double se = std::sqrt(var / 10'000 + var / 100'000);
        CHECK(std::abs(small - large) <= 2.0 * se);
    }
}

TEST_CASE("reward gap shrinks over a chain run") {
    AgentConfig cfg;
    cfg.lambda = 0.5;
    cfg.episodes = 200;
    cfg.horizon = 100;
    TsebAgent agent(cfg, 5, 2, PriorConfig{});
    auto env = chain_world(split_seed(12, 1));
    Rng rng = Rng(12).split(2);
    std::vector<double> gaps;
    for (std::size_t e = 0; e < cfg.episodes; ++e) gaps.push_back(agent.run_episode(*env, rng).k_r_max);
    const std::size_t tenth = gaps.size() / 10;
    const double first = std::accumulate(gaps.begin(), gaps.begin() + tenth, 0.0) / tenth;
    const double last = std::accumulate(gaps.end() - tenth, gaps.end(), 0.0) / tenth;
    CHECK(last < first);
}
