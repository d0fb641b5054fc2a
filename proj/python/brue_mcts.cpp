#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "brue/bounds.hpp"
#include "brue/cli.hpp"
#include "brue/errors.hpp"
#include "brue/gametree.hpp"
#include "brue/oracle.hpp"
#include "brue/planner.hpp"
#include "brue/regret.hpp"
#include "brue/rng.hpp"
#include "brue/sailing.hpp"
#include "brue/tabular.hpp"

namespace py = pybind11;
using namespace brue;

namespace {

StateId sid(std::uint64_t v) {
    return StateId{v};
}

std::vector<std::uint64_t> ids(const std::vector<StateId>& states) {
    std::vector<std::uint64_t> out;
    out.reserve(states.size());
    for (StateId s : states) {
        out.push_back(s.value);
    }
    return out;
}

py::dict bound_dict(const BoundConstants& b) {
    py::dict d;
    d["c"] = b.c ? py::cast(*b.c) : py::none();
    d["c_prime"] = b.c_prime ? py::cast(*b.c_prime) : py::none();
    d["log_c"] = b.log_c;
    d["log_c_prime"] = b.log_c_prime;
    d["transition_n"] = b.transition_n;
    d["log_transition_n"] = b.log_transition_n;
    d["log_c_h"] = b.log_c_h;
    d["log_c_h_prime"] = b.log_c_h_prime;
    return d;
}

} // namespace

PYBIND11_MODULE(brue_mcts, m) {
    m.doc() = "Monte-Carlo tree search planners (UCT, BRUE and variants), exact oracles and bound calculators";

    // Translators run newest first, so the base class is registered first.
    const auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<ResourceError>(m, "ResourceError", base);
    py::register_exception<CapabilityError>(m, "CapabilityError", base);
    py::register_exception<DegenerateInstance>(m, "DegenerateInstance", base);
    py::register_exception<InsufficientBudget>(m, "InsufficientBudget", base);

    py::class_<GenerativeMdp>(m, "Mdp")
        .def_property_readonly("name", [](const GenerativeMdp& mdp) { return std::string(mdp.name()); })
        .def_property_readonly("horizon", &GenerativeMdp::horizon)
        .def("num_actions", [](const GenerativeMdp& mdp, std::uint64_t s) { return mdp.num_actions(sid(s)); })
        .def("is_terminal", [](const GenerativeMdp& mdp, std::uint64_t s) { return mdp.is_terminal(sid(s)); })
        .def("minimizes", [](const GenerativeMdp& mdp, std::uint64_t s) { return mdp.minimizes(sid(s)); })
        .def(
            "sample",
            [](const GenerativeMdp& mdp, std::uint64_t s, ActionId a, std::uint64_t seed) {
                RngStream rng(seed, 0);
                const Transition t = mdp.sample_transition(sid(s), a, rng);
                return py::make_tuple(t.next.value, t.reward);
            },
            py::arg("state"), py::arg("action"), py::arg("seed") = 0)
        .def("outcomes",
             [](const GenerativeMdp& mdp, std::uint64_t s, ActionId a) {
                 std::vector<py::tuple> out;
                 for (const Outcome& o : mdp.enumerate_outcomes(sid(s), a)) {
                     out.push_back(py::make_tuple(o.next.value, o.probability, o.reward));
                 }
                 return out;
             })
        .def("describe", [](const GenerativeMdp& mdp, std::uint64_t s) { return mdp.describe_state(sid(s)); });

    py::class_<SailingMdp, GenerativeMdp>(m, "SailingMdp")
        .def(py::init([](int grid, double wind_persist, double wind_rotate, double tack_penalty) {
                 SailingConfig c;
                 c.grid_size = grid;
                 c.wind_persist_prob = wind_persist;
                 c.wind_rotate_prob = wind_rotate;
                 c.tack_change_penalty = tack_penalty;
                 return SailingMdp(c);
             }),
             py::arg("grid") = 5, py::arg("wind_persist") = 0.4, py::arg("wind_rotate") = 0.3,
             py::arg("tack_penalty") = 3.0)
        .def("non_goal_states", [](const SailingMdp& mdp) { return ids(mdp.non_goal_states()); })
        .def_property_readonly("goal_state", [](const SailingMdp& mdp) { return mdp.goal_state().value; });

    py::class_<GameTreeMdp, GenerativeMdp>(m, "GameTreeMdp")
        .def(py::init([](int branching, int depth, std::uint64_t seed) {
                 GameTreeSpec spec;
                 spec.branching = branching;
                 spec.depth = depth;
                 spec.tree_seed = seed;
                 spec.validate();
                 return GameTreeMdp(spec);
             }),
             py::arg("branching") = 2, py::arg("depth") = 10, py::arg("seed") = 0)
        .def_property_readonly("root", [](const GameTreeMdp& t) { return t.root().value; })
        .def("child", [](const GameTreeMdp& t, std::uint64_t s, ActionId a) { return t.child(sid(s), a).value; })
        .def("payoff", [](const GameTreeMdp& t, std::uint64_t leaf) { return t.payoff(sid(leaf)); });

    py::class_<TabularMdp, GenerativeMdp>(m, "TabularMdp")
        .def_property_readonly("start", [](const TabularMdp& t) { return t.start().value; })
        .def_property_readonly("state_count", &TabularMdp::state_count);
    m.def("tiny_mdp", &tiny_benchmark_mdp, "The fixed K=2, B=2, H=3 benchmark MDP");
    m.def(
        "random_mdp",
        [](int actions, int outcomes, int horizon, std::uint64_t seed) {
            return random_tabular_mdp(RandomMdpSpec{actions, outcomes, horizon}, seed);
        },
        py::arg("actions") = 2, py::arg("outcomes") = 2, py::arg("horizon") = 2, py::arg("seed") = 0);
    m.def("bandit_mdp", &bernoulli_bandit_mdp, py::arg("success_probs"));

    m.def(
        "plan",
        [](const GenerativeMdp& mdp, std::uint64_t state, std::uint64_t budget, const std::string& algorithm,
           std::uint64_t seed) {
            const PlannerConfig config = parse_planner(algorithm);
            py::gil_scoped_release release;
            return mcts_plan(mdp, sid(state), budget, config, RngStream(seed, 0));
        },
        py::arg("mdp"), py::arg("state"), py::arg("budget"), py::arg("algorithm") = "brue", py::arg("seed") = 0,
        "Runs `budget` iterations from `state` and returns the recommended action.");
    m.def("canonical_planner", [](const std::string& text) { return to_string(parse_planner(text)); });

    py::class_<OracleTable>(m, "Oracle")
        .def(py::init([](const GenerativeMdp& mdp, std::vector<std::uint64_t> starts, std::uint64_t cap) {
                 std::vector<StateId> s;
                 for (std::uint64_t v : starts) {
                     s.push_back(sid(v));
                 }
                 OracleTable t = build_oracle(mdp, mdp.horizon(), s, cap);
                 t.set_params(extract_params(mdp, t));
                 return t;
             }),
             py::arg("mdp"), py::arg("starts"), py::arg("cap") = kDefaultOracleCap)
        .def_static(
            "for_game_tree",
            [](const GameTreeMdp& tree, std::uint64_t leaf_cap) { return minimax_oracle(tree.spec(), leaf_cap); },
            py::arg("tree"), py::arg("leaf_cap") = 1ull << 24)
        .def_property_readonly("horizon", &OracleTable::horizon)
        .def("value", [](const OracleTable& o, std::uint64_t s) { return o.value(sid(s), o.horizon()); })
        .def("q_values",
             [](const OracleTable& o, std::uint64_t s) {
                 const auto q = o.q_values(sid(s), o.horizon());
                 return std::vector<double>(q.begin(), q.end());
             })
        .def("optimal_action", [](const OracleTable& o, std::uint64_t s) { return o.optimal_action(sid(s), o.horizon()); })
        .def("simple_regret",
             [](const OracleTable& o, std::uint64_t s, ActionId a) { return simple_regret(o, sid(s), o.horizon(), a); })
        .def_property_readonly("params", [](const OracleTable& o) {
            const BoundParams& p = o.params();
            py::dict d;
            d["K"] = p.K;
            d["B"] = p.B;
            d["p"] = p.p;
            d["d"] = p.d;
            d["H"] = p.H;
            d["degenerate"] = p.degenerate;
            return d;
        });

    m.def(
        "theorem_constants",
        [](double p, double d, std::uint64_t K, int H) { return bound_dict(theorem1_constants(p, d, K, H)); },
        py::arg("p"), py::arg("d"), py::arg("K"), py::arg("H"));
    m.def(
        "flat_bounds",
        [](std::uint64_t K, std::uint64_t B, int H, double d, std::uint64_t n) {
            const FlatBounds f = naive_crafty_bounds(K, B, H, d, n);
            py::dict out;
            out["naive"] = f.naive;
            out["crafty"] = f.crafty;
            out["naive_choice"] = f.naive_choice;
            out["crafty_choice"] = f.crafty_choice;
            out["crafty_transition"] = f.crafty_transition;
            return out;
        },
        py::arg("K"), py::arg("B"), py::arg("H"), py::arg("d"), py::arg("n"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"brue"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const std::string& a : full) {
                argv.push_back(a.c_str());
            }
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line with `args`; returns (exit code, stdout, stderr).");
}
