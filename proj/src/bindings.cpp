#include "tseb/agent.hpp"
#include "tseb/bonus.hpp"
#include "tseb/config.hpp"
#include "tseb/envs.hpp"
#include "tseb/errors.hpp"
#include "tseb/mdp.hpp"
#include "tseb/metrics.hpp"
#include "tseb/posterior.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace tseb;

namespace {

std::size_t checked_horizon(long long horizon) {
    if (horizon <= 0) throw InvalidInputError("horizon must be >= 1");
    return static_cast<std::size_t>(horizon);
}

py::dict trace_columns(const MetricsTrace& trace) {
    std::vector<double> episode_return, cumulative, f_value, f_bound_col, avg_regret, tau;
    std::vector<std::uint64_t> n_min;
    for (const auto& row : trace.rows()) {
        episode_return.push_back(row.episode_return);
        cumulative.push_back(row.cumulative_reward);
        f_value.push_back(row.f_value);
        f_bound_col.push_back(row.f_bound);
        avg_regret.push_back(row.avg_regret);
        n_min.push_back(row.n_min);
        tau.push_back(row.tau_bound);
    }
    py::dict out;
    out["episode_return"] = episode_return;
    out["cumulative_reward"] = cumulative;
    out["f_value"] = f_value;
    out["f_bound"] = f_bound_col;
    out["avg_regret"] = avg_regret;
    out["n_min"] = n_min;
    out["tau_bound"] = tau;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tabular Thompson sampling with an adaptive exploration bonus.";

    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

    py::class_<TabularMdp>(m, "TabularMdp")
        .def(py::init<std::size_t, std::size_t, std::vector<double>, std::vector<double>, double, double>(),
             py::arg("n_states"), py::arg("n_actions"), py::arg("transition"), py::arg("reward"),
             py::arg("discount"), py::arg("reward_range"))
        .def_property_readonly("n_states", &TabularMdp::n_states)
        .def_property_readonly("n_actions", &TabularMdp::n_actions)
        .def_property_readonly("discount", &TabularMdp::discount)
        .def_property_readonly("reward_range", &TabularMdp::reward_range)
        .def_property_readonly("transition", &TabularMdp::transitions)
        .def_property_readonly("reward", &TabularMdp::rewards);

    py::class_<PlanResult>(m, "PlanResult")
        .def_readonly("values", &PlanResult::values)
        .def_readonly("policy", &PlanResult::policy)
        .def_readonly("iterations", &PlanResult::iterations)
        .def_readonly("residual", &PlanResult::residual)
        .def_readonly("converged", &PlanResult::converged);

    m.def(
        "bellman_backup",
        [](const TabularMdp& mdp, const std::vector<double>& v, double lambda, std::vector<double> rho) {
            if (rho.empty()) rho.assign(mdp.n_states() * mdp.n_actions(), 0.0);
            return bellman_backup(mdp, {lambda, std::move(rho)}, v);
        },
        py::arg("mdp"), py::arg("v"), py::arg("lam") = 1.0, py::arg("rho") = std::vector<double>{});
    m.def(
        "value_iteration",
        [](const TabularMdp& mdp, double lambda, std::vector<double> rho, double tol, std::size_t max_iter) {
            if (rho.empty()) rho.assign(mdp.n_states() * mdp.n_actions(), 0.0);
            return value_iteration(mdp, {lambda, std::move(rho)}, {tol, max_iter});
        },
        py::arg("mdp"), py::arg("lam") = 1.0, py::arg("rho") = std::vector<double>{}, py::arg("tol") = 1e-8,
        py::arg("max_iter") = 10'000);
    m.def("policy_value", &policy_value, py::arg("mdp"), py::arg("policy"));
    m.def(
        "finite_horizon_values",
        [](const TabularMdp& mdp, long long horizon) { return finite_horizon_values(mdp, checked_horizon(horizon)); },
        py::arg("mdp"), py::arg("horizon"));

    m.def("k_r", &k_r, py::arg("sampled_reward"), py::arg("empirical_mean"));
    m.def("f_global", &f_global, py::arg("k_r_max"), py::arg("gamma"), py::arg("n_min"), py::arg("delta_r") = 2.0);
    m.def("f_state", &f_state, py::arg("k_r_sa"), py::arg("gamma"), py::arg("n_sa"));
    m.def("tau_bound", &tau_bound, py::arg("n_min"), py::arg("gamma"), py::arg("n_states"), py::arg("n_actions"),
          py::arg("c") = 2.0);
    m.def(
        "pac_sample_bound",
        [](std::size_t s, std::size_t a, double f0, double epsilon, double delta) {
            return pac_sample_bound(s, a, f0, {epsilon, delta});
        },
        py::arg("n_states"), py::arg("n_actions"), py::arg("f0"), py::arg("epsilon"), py::arg("delta"));
    m.def(
        "episode_regret",
        [](const TabularMdp& mdp, long long horizon, std::size_t start, double achieved) {
            return episode_regret(mdp, checked_horizon(horizon), start, achieved);
        },
        py::arg("true_mdp"), py::arg("horizon"), py::arg("start_state"), py::arg("achieved_return"));

    m.def("chain_world_mdp", &ChainWorld::build_mdp, py::arg("discount") = ChainWorld::default_discount);
    m.def("queuing_world_mdp", &QueuingWorld::build_mdp, py::arg("arrival_prob") = QueuingWorld::default_arrival,
          py::arg("discount") = QueuingWorld::default_discount);

    m.def(
        "run_experiment",
        [](const std::string& env, double lambda, std::size_t episodes, std::size_t horizon, std::uint64_t seed,
           double gamma, const std::string& bonus_mode, const std::string& cadence, double arrival_prob) {
            auto cfg = ExperimentConfig::defaults_for(env);
            cfg.lambda = lambda;
            cfg.episodes = episodes;
            cfg.horizon = horizon;
            cfg.gamma = gamma;
            cfg.bonus_mode = parse_bonus_mode(bonus_mode);
            cfg.cadence = parse_cadence(cadence);
            cfg.arrival_prob = arrival_prob;
            cfg.validate();
            const EnvFactory factory = environment_factory(cfg.environment_options());
            const AgentConfig config = cfg.agent_config();
            py::gil_scoped_release release;
            return run_experiment(factory, config, cfg.prior, seed).trace;
        },
        py::arg("env") = "chain", py::arg("lam") = 0.5, py::arg("episodes") = 100, py::arg("horizon") = 100,
        py::arg("seed") = 0, py::arg("gamma") = 0.8, py::arg("bonus_mode") = "recurrence",
        py::arg("cadence") = "per_episode", py::arg("arrival_prob") = QueuingWorld::default_arrival);

    py::class_<MetricsTrace>(m, "MetricsTrace")
        .def("__len__", &MetricsTrace::size)
        .def_property_readonly("cumulative_reward", &MetricsTrace::cumulative_reward)
        .def("columns", &trace_columns, "Per-episode metrics as a dict of lists.");
}
