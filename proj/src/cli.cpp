#include "brue/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "brue/azuma.hpp"
#include "brue/bench.hpp"
#include "brue/bounds.hpp"
#include "brue/errors.hpp"
#include "brue/format.hpp"
#include "brue/oracle_cache.hpp"
#include "brue/parallel.hpp"

namespace brue {

namespace {

std::uint64_t parse_power(std::string_view text) {
    if (text.starts_with("2^")) {
        const std::uint64_t k = parse_uint(text.substr(2), "budget exponent");
        if (k > 62) {
            throw ConfigError("budget exponent " + std::to_string(k) + " is too large");
        }
        return std::uint64_t{1} << k;
    }
    return parse_uint(text, "budget");
}

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    unsigned jobs = 1;
};

struct ExperimentOptions {
    std::string budgets;
    std::string algorithms;
    std::uint64_t trials = 1;
    bool timing = false;
};

void add_experiment_options(CLI::App& sub, ExperimentOptions& o) {
    sub.add_option("--budgets", o.budgets, "Iteration budgets, e.g. 128,256 or 2^7..2^15")
        ->capture_default_str();
    sub.add_option("--algorithms", o.algorithms, "Planner list, e.g. \"uct;brue-alpha:0.9\"")
        ->capture_default_str();
    sub.add_option("--trials", o.trials, "Number of trials")->capture_default_str();
    sub.add_flag("--timing", o.timing, "Add a wall_time_s column (machine dependent)");
}

ExperimentConfig make_experiment(const ExperimentOptions& o, const Globals& g) {
    ExperimentConfig e;
    e.algorithms = parse_planner_list(o.algorithms);
    e.budgets = parse_budget_grid(o.budgets);
    e.trials = o.trials;
    e.seed = g.seed;
    e.jobs = g.jobs == 0 ? default_jobs() : g.jobs;
    e.timing = o.timing;
    return e;
}

/// Writes to --out when given, else to `fallback`.
template <typename Fn>
void emit(const Globals& g, std::ostream& fallback, Fn&& fn) {
    if (g.out.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream file(g.out, std::ios::binary);
    if (!file) {
        throw Error("cannot open output file " + g.out);
    }
    fn(file);
    file.flush();
    if (!file) {
        throw Error("failed writing " + g.out);
    }
}

struct SailingOptions {
    ExperimentOptions experiment{"2^7..2^15", "uct;gct:eps=0.5;brue;brue-per-alpha:0.9", 200, false};
    int grid = 0;
    std::string goal;
    std::optional<double> wind_persist;
    std::optional<double> wind_rotate;
    std::string move_costs;
    std::optional<double> tack_penalty;
    std::optional<double> diagonal_factor;
    std::uint64_t oracle_cap = kDefaultOracleCap;
    bool cache = false;
    std::string cache_dir;
};

SailingBenchConfig make_sailing(const SailingOptions& o, const Globals& g) {
    SailingBenchConfig c;
    c.experiment = make_experiment(o.experiment, g);
    c.sailing.grid_size = o.grid;
    if (!o.goal.empty()) {
        const auto parts = split_list(o.goal);
        if (parts.size() != 2) {
            throw ConfigError("--goal expects x,y");
        }
        c.sailing.goal_x = static_cast<int>(parse_uint(parts[0], "goal x"));
        c.sailing.goal_y = static_cast<int>(parse_uint(parts[1], "goal y"));
    }
    if (o.wind_persist) {
        c.sailing.wind_persist_prob = *o.wind_persist;
    }
    if (o.wind_rotate) {
        c.sailing.wind_rotate_prob = *o.wind_rotate;
    }
    if (!o.move_costs.empty()) {
        const auto parts = split_list(o.move_costs);
        if (parts.size() != c.sailing.move_cost.size()) {
            throw ConfigError("--move-costs expects 7 values");
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
            c.sailing.move_cost[i] = parse_real(parts[i], "move cost");
        }
    }
    if (o.tack_penalty) {
        c.sailing.tack_change_penalty = *o.tack_penalty;
    }
    if (o.diagonal_factor) {
        c.sailing.diagonal_factor = *o.diagonal_factor;
    }
    c.sailing.validate();
    c.oracle_cap = o.oracle_cap;
    if (!o.cache_dir.empty()) {
        c.cache_dir = o.cache_dir;
    } else if (o.cache) {
        c.cache_dir = default_oracle_cache_dir();
    }
    return c;
}

struct GameTreeOptions {
    ExperimentOptions experiment{"2^6..2^14", "uct;brue", 100, false};
    int branching = 2;
    int depth = 10;
    std::uint64_t leaf_cap = 1ull << 24;
};

struct SandboxOptions {
    ExperimentOptions experiment{"", "naive;crafty", 10000, false};
    std::string mdp = "tiny";
    std::uint64_t mdp_seed = 1;
    int actions = 2;
    int outcomes = 2;
    int horizon = 2;
};

struct BoundsOptions {
    double p = 0.0;
    double d = 0.0;
    std::uint64_t K = 0;
    int H = 0;
    std::optional<std::uint64_t> B;
    std::optional<std::uint64_t> n;
};

void print_bounds(std::ostream& out, const BoundsOptions& o) {
    const BoundConstants t = theorem1_constants(o.p, o.d, o.K, o.H);
    const auto value = [](const std::optional<double>& v, double log_v) {
        return v ? format_real(*v) : "exp(" + format_real(log_v) + ")";
    };
    out << "c=" << value(t.c, t.log_c) << '\n'
        << "c'=" << value(t.c_prime, t.log_c_prime) << '\n'
        << "log_c=" << format_real(t.log_c) << '\n'
        << "log_c'=" << format_real(t.log_c_prime) << '\n'
        << "transition_n=" << format_real(t.transition_n) << '\n'
        << "log_transition_n=" << format_real(t.log_transition_n) << '\n'
        << "basis_log_c1=" << format_real(t.log_c1_basis) << '\n'
        << "basis_log_c1'=" << format_real(t.log_c1_prime_basis) << '\n';
    for (std::size_t i = 0; i < t.log_c_h.size(); ++i) {
        out << "level " << i + 1 << ": log_c=" << format_real(t.log_c_h[i])
            << " log_c'=" << format_real(t.log_c_h_prime[i]) << '\n';
    }
    if (o.B && o.n) {
        const FlatBounds f = naive_crafty_bounds(o.K, *o.B, o.H, o.d, *o.n);
        out << "naive=" << format_real(f.naive) << '\n'
            << "log_naive=" << format_real(f.log_naive) << '\n'
            << "crafty=" << format_real(f.crafty) << '\n'
            << "log_crafty=" << format_real(f.log_crafty) << '\n'
            << "naive_choice=" << format_real(f.naive_choice) << '\n'
            << "crafty_choice=" << format_real(f.crafty_choice) << '\n'
            << "crafty_transition=" << format_real(f.crafty_transition) << '\n';
    } else if (o.B || o.n) {
        throw ConfigError("--B and --n must be given together");
    }
}

struct AzumaOptions {
    std::uint64_t trials = 100000;
    std::string t_grid = "10,50,100,500";
    std::optional<double> h;
    std::optional<double> mu;
    std::optional<double> delta;
    std::optional<double> c_p;
    std::optional<double> c_e;
    std::optional<double> alpha;
    std::optional<double> beta;

    bool single() const { return h || mu || delta || c_p || c_e || alpha || beta; }
};

std::string azuma_text(const AzumaOptions& o, const std::vector<AzumaScenario>& scenarios,
                       const std::vector<std::uint64_t>& grid, std::uint64_t seed) {
    std::ostringstream out;
    out << "seed = " << seed << '\n' << "trials = " << o.trials << '\n' << "t-grid = \"";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << (i ? "," : "") << grid[i];
    }
    out << "\"\n";
    if (o.single()) {
        const AzumaScenario& s = scenarios.front();
        out << "h = " << format_real(s.h) << '\n'
            << "mu = " << format_real(s.mean()) << '\n'
            << "delta = " << format_real(s.delta) << '\n'
            << "c-p = " << format_real(s.c_p) << '\n'
            << "c-e = " << format_real(s.c_e) << '\n'
            << "alpha = " << format_real(s.alpha) << '\n';
        if (s.beta) {
            out << "beta = " << format_real(*s.beta) << '\n';
        }
    } else {
        out << "scenarios = \"default\"\n";
    }
    return out.str();
}

} // namespace

std::vector<std::uint64_t> parse_budget_grid(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (const std::string& item : split_list(text)) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_power(item));
            continue;
        }
        const std::string lo = item.substr(0, dots);
        const std::string hi = item.substr(dots + 2);
        if (!lo.starts_with("2^") || !hi.starts_with("2^")) {
            throw ConfigError("budget range '" + item + "' must have the form 2^lo..2^hi");
        }
        const auto a = parse_uint(std::string_view(lo).substr(2), "budget exponent");
        const auto b = parse_uint(std::string_view(hi).substr(2), "budget exponent");
        if (a > b || b > 62) {
            throw ConfigError("bad budget range '" + item + "'");
        }
        for (auto v : power_of_two_budgets(static_cast<int>(a), static_cast<int>(b))) {
            out.push_back(v);
        }
    }
    return out;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte-Carlo tree search planners, oracles and benchmarks", "brue"};
    app.set_config("--config", "", "TOML-like key = value file; command line flags take precedence");
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::help);

    Globals g;
    app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
    app.add_option("--out", g.out, "Output file (default: standard output)");
    app.add_option("--jobs", g.jobs, "Worker threads; 0 uses every core")->capture_default_str();

    SailingOptions so;
    CLI::App* sailing = app.add_subcommand("bench-sailing", "Sailing-domain error versus budget");
    add_experiment_options(*sailing, so.experiment);
    sailing->add_option("--grid", so.grid, "Grid side length")->required();
    sailing->add_option("--goal", so.goal, "Goal cell x,y (default: far corner)");
    sailing->add_option("--wind-persist", so.wind_persist, "Probability the wind keeps its direction");
    sailing->add_option("--wind-rotate", so.wind_rotate, "Probability of each one-step wind turn");
    sailing->add_option("--move-costs", so.move_costs, "Seven costs by angle to the wind");
    sailing->add_option("--tack-penalty", so.tack_penalty, "Extra cost of changing tack");
    sailing->add_option("--diagonal-factor", so.diagonal_factor, "Cost multiplier of diagonal moves");
    sailing->add_option("--oracle-cap", so.oracle_cap, "Largest oracle table in Q cells")
        ->capture_default_str();
    sailing->add_flag("--cache", so.cache, "Cache the oracle in $BRUE_ORACLE_CACHE or ./oracle-cache");
    sailing->add_option("--cache-dir", so.cache_dir, "Cache the oracle in this directory");

    GameTreeOptions go;
    CLI::App* gametree = app.add_subcommand("bench-gametree", "Random game-tree error versus budget");
    add_experiment_options(*gametree, go.experiment);
    gametree->add_option("--branching", go.branching, "Moves per node")->capture_default_str();
    gametree->add_option("--depth", go.depth, "Plies")->capture_default_str();
    gametree->add_option("--leaf-cap", go.leaf_cap, "Largest tree in leaves")->capture_default_str();

    SandboxOptions xo;
    CLI::App* sandbox = app.add_subcommand("sandbox", "NaiveUniform versus CraftyUniform on a tiny MDP");
    add_experiment_options(*sandbox, xo.experiment);
    sandbox->add_option("--mdp", xo.mdp, "tiny or random")->capture_default_str();
    sandbox->add_option("--mdp-seed", xo.mdp_seed, "Seed of the random MDP")->capture_default_str();
    sandbox->add_option("--mdp-actions", xo.actions, "Random MDP actions per state")->capture_default_str();
    sandbox->add_option("--mdp-outcomes", xo.outcomes, "Random MDP outcomes per action")
        ->capture_default_str();
    sandbox->add_option("--mdp-horizon", xo.horizon, "Random MDP horizon")->capture_default_str();

    BoundsOptions bo;
    CLI::App* bounds = app.add_subcommand("bounds", "Regret-bound constants");
    bounds->add_option("--p", bo.p, "Smallest positive transition probability")->required();
    bounds->add_option("--d", bo.d, "Smallest optimality gap")->required();
    bounds->add_option("--K", bo.K, "Actions per state")->required();
    bounds->add_option("--H", bo.H, "Horizon")->required();
    bounds->add_option("--B", bo.B, "Outcomes per action (flat-policy bounds)");
    bounds->add_option("--n", bo.n, "Iterations (flat-policy bounds)");

    AzumaOptions ao;
    CLI::App* azuma = app.add_subcommand("azuma-check", "Monte-Carlo check of the concentration bounds");
    azuma->set_help_flag("--help", "Print this help message and exit");
    azuma->add_option("--trials", ao.trials, "Sample paths per scenario")->capture_default_str();
    azuma->add_option("--t-grid", ao.t_grid, "Sequence lengths")->capture_default_str();
    azuma->add_option("--h", ao.h, "Range [0, h]; any scenario option replaces the default grid");
    azuma->add_option("--mu", ao.mu, "Mean (default h/2)");
    azuma->add_option("--delta", ao.delta, "Deviation");
    azuma->add_option("--c-p", ao.c_p, "Contamination scale");
    azuma->add_option("--c-e", ao.c_e, "Contamination decay rate");
    azuma->add_option("--alpha", ao.alpha, "Window fraction");
    azuma->add_option("--beta", ao.beta, "Use the beta-family bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sailing->parsed()) {
            const SailingBenchConfig c = make_sailing(so, g);
            const BenchResult r = run_sailing_bench(c);
            emit(g, out, [&](std::ostream& o) { write_bench_csv(o, r, "bench-sailing", c.to_text(), c.experiment); });
        } else if (gametree->parsed()) {
            GameTreeBenchConfig c;
            c.experiment = make_experiment(go.experiment, g);
            c.branching = go.branching;
            c.depth = go.depth;
            c.leaf_cap = go.leaf_cap;
            const BenchResult r = run_gametree_bench(c);
            emit(g, out, [&](std::ostream& o) { write_bench_csv(o, r, "bench-gametree", c.to_text(), c.experiment); });
        } else if (sandbox->parsed()) {
            SandboxConfig c;
            ExperimentOptions eo = xo.experiment;
            std::string budgets;
            std::swap(budgets, eo.budgets);
            c.experiment = make_experiment(eo, g);
            c.experiment.budgets = parse_budget_grid(budgets);
            c.mdp = xo.mdp;
            c.mdp_seed = xo.mdp_seed;
            c.random_spec.actions = xo.actions;
            c.random_spec.outcomes = xo.outcomes;
            c.random_spec.horizon = xo.horizon;
            c = c.resolved();
            const BenchResult r = run_sandbox(c);
            emit(g, out, [&](std::ostream& o) { write_bench_csv(o, r, "sandbox", c.to_text(), c.experiment); });
        } else if (bounds->parsed()) {
            std::ostringstream text;
            print_bounds(text, bo);
            emit(g, out, [&](std::ostream& o) { o << text.str(); });
        } else if (azuma->parsed()) {
            std::vector<AzumaScenario> scenarios;
            if (ao.single()) {
                AzumaScenario s;
                s.h = ao.h.value_or(s.h);
                s.mu = ao.mu;
                s.delta = ao.delta.value_or(s.h / 4);
                s.c_p = ao.c_p.value_or(s.c_p);
                s.c_e = ao.c_e.value_or(s.c_e);
                s.alpha = ao.alpha.value_or(s.alpha);
                s.beta = ao.beta;
                scenarios.push_back(s);
            } else {
                scenarios = default_azuma_grid();
            }
            const auto grid = parse_budget_grid(ao.t_grid);
            const unsigned jobs = g.jobs == 0 ? default_jobs() : g.jobs;
            const auto rows = azuma_check(scenarios, grid, ao.trials, g.seed, jobs);
            const std::string resolved = azuma_text(ao, scenarios, grid, g.seed);
            emit(g, out, [&](std::ostream& o) {
                write_metadata(o, "azuma-check", g.seed, resolved);
                write_azuma_csv(o, rows);
            });
            for (const AzumaRow& row : rows) {
                if (row.violation) {
                    err << "azuma-check: empirical tail exceeds the analytic bound\n";
                    return kExitFailure;
                }
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegenerateInstance& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

int cli_dispatch(int argc, const char* const* argv) {
    return cli_dispatch(argc, argv, std::cout, std::cerr);
}

} // namespace brue
