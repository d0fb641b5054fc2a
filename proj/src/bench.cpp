#include "brue/bench.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "brue/errors.hpp"
#include "brue/flat_policy.hpp"
#include "brue/format.hpp"
#include "brue/oracle_cache.hpp"
#include "brue/parallel.hpp"
#include "brue/regret.hpp"
#include "brue/stats.hpp"

#ifndef BRUE_VERSION
#define BRUE_VERSION "0.0.0"
#endif

namespace brue {

namespace {

constexpr std::uint64_t kInitialStateTag = 0x696e6974ull;
constexpr std::uint64_t kSearchTag = 0x736561726368ull;
constexpr std::uint64_t kRecommendTag = 0x7265636full;
constexpr std::uint64_t kTreeTag = 0x74726565ull;

std::string join_budgets(const std::vector<std::uint64_t>& budgets) {
    std::string out;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        out += (i == 0 ? "" : ",") + std::to_string(budgets[i]);
    }
    return out;
}

/// Quotes a CSV field when it contains a separator or a quote.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string experiment_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "seed = " << c.seed << '\n'
        << "trials = " << c.trials << '\n'
        << "budgets = \"" << join_budgets(c.budgets) << "\"\n"
        << "algorithms = \"" << to_string(c.algorithms) << "\"\n"
        << "timing = " << (c.timing ? "true" : "false") << '\n';
    return out.str();
}

} // namespace

void ExperimentConfig::validate() const {
    if (algorithms.empty()) {
        throw ConfigError("at least one algorithm is required");
    }
    for (const auto& a : algorithms) {
        a.validate();
    }
    if (budgets.empty()) {
        throw ConfigError("the budget grid is empty");
    }
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        if (budgets[i] == 0) {
            throw ConfigError("budgets must be positive");
        }
        if (i > 0 && budgets[i] <= budgets[i - 1]) {
            throw ConfigError("the budget grid must be strictly increasing");
        }
    }
    if (trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
}

std::vector<std::uint64_t> power_of_two_budgets(int lo, int hi) {
    if (lo < 0 || hi < lo || hi > 62) {
        throw ConfigError("invalid power-of-two budget range");
    }
    std::vector<std::uint64_t> out;
    for (int e = lo; e <= hi; ++e) {
        out.push_back(1ull << e);
    }
    return out;
}

std::vector<double> BenchResult::errors(std::size_t algorithm, std::size_t budget) const {
    std::vector<double> out(trials);
    const std::size_t base = (algorithm * budget_count + budget) * trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        out[t] = records[base + t].error;
    }
    return out;
}

std::vector<double> BenchResult::choice_errors(std::size_t algorithm, std::size_t budget) const {
    std::vector<double> out(trials);
    const std::size_t base = (algorithm * budget_count + budget) * trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        out[t] = records[base + t].optimal ? 0.0 : 1.0;
    }
    return out;
}

const SummaryRecord& BenchResult::summary(std::size_t algorithm, std::size_t budget) const {
    return summaries[algorithm * budget_count + budget];
}

BenchResult run_trials(const std::string& domain, const ExperimentConfig& config,
                       const std::function<TrialSetup(std::uint64_t)>& setup) {
    config.validate();
    const std::size_t na = config.algorithms.size();
    const std::size_t nb = config.budgets.size();
    const std::uint64_t nt = config.trials;

    BenchResult result;
    result.domain = domain;
    result.algorithm_count = na;
    result.budget_count = nb;
    result.trials = nt;
    result.records.resize(na * nb * nt);

    std::vector<std::string> names;
    std::vector<std::uint64_t> name_hashes;
    for (const auto& a : config.algorithms) {
        names.push_back(to_string(a));
        name_hashes.push_back(fnv1a64(names.back()));
    }

    parallel_for(nt, config.jobs, [&](std::size_t trial) {
        const TrialSetup ts = setup(trial);
        for (std::size_t ai = 0; ai < na; ++ai) {
            using clock = std::chrono::steady_clock;
            const auto start = clock::now();
            RngStream search(config.seed, derive_stream_id({kSearchTag, trial, name_hashes[ai]}));
            auto planner = make_planner(*ts.mdp, ts.root, config.algorithms[ai], search);
            std::uint64_t done = 0;
            for (std::size_t bi = 0; bi < nb; ++bi) {
                for (; done < config.budgets[bi]; ++done) {
                    planner->run_iteration();
                }
                RngStream tie(config.seed,
                              derive_stream_id({kRecommendTag, trial, name_hashes[ai], config.budgets[bi]}));
                BenchmarkRecord& r = result.records[(ai * nb + bi) * nt + trial];
                try {
                    r.action = planner->recommend(tie);
                } catch (const InsufficientBudget&) {
                    r.action = static_cast<ActionId>(tie.uniform_index(ts.mdp->num_actions(ts.root)));
                    r.fallback = true;
                }
                r.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
                r.domain = domain;
                r.algorithm = names[ai];
                r.budget = config.budgets[bi];
                r.trial = trial;
                r.initial_state = ts.root;
                r.error = ts.error(r.action);
                r.optimal = r.error <= 1e-9;
            }
        }
    });

    for (std::size_t ai = 0; ai < na; ++ai) {
        for (std::size_t bi = 0; bi < nb; ++bi) {
            const auto errs = result.errors(ai, bi);
            const MeanSummary m = summarize(errs);
            SummaryRecord s;
            s.algorithm = names[ai];
            s.budget = config.budgets[bi];
            s.mean_error = m.mean;
            s.std_error = m.std_error;
            s.count = nt;
            std::uint64_t optimal = 0;
            for (std::uint64_t t = 0; t < nt; ++t) {
                const auto& r = result.records[(ai * nb + bi) * nt + t];
                optimal += r.optimal ? 1 : 0;
                s.fallbacks += r.fallback ? 1 : 0;
            }
            s.optimal_rate = static_cast<double>(optimal) / static_cast<double>(nt);
            result.summaries.push_back(s);
        }
    }
    return result;
}

// ---------------------------------------------------------------- sailing

std::string SailingBenchConfig::to_text() const {
    std::ostringstream out;
    out << experiment_text(experiment) << "grid = " << sailing.grid_size << '\n'
        << "goal = \"" << sailing.resolved_goal_x() << ',' << sailing.resolved_goal_y() << "\"\n"
        << "wind-persist = " << format_real(sailing.wind_persist_prob) << '\n'
        << "wind-rotate = " << format_real(sailing.wind_rotate_prob) << '\n'
        << "move-costs = \"";
    for (std::size_t i = 0; i < sailing.move_cost.size(); ++i) {
        out << (i ? "," : "") << format_real(sailing.move_cost[i]);
    }
    out << "\"\n"
        << "tack-penalty = " << format_real(sailing.tack_change_penalty) << '\n'
        << "diagonal-factor = " << format_real(sailing.diagonal_factor) << '\n'
        << "oracle-cap = " << oracle_cap << '\n';
    return out.str();
}

BenchResult run_sailing_bench(const SailingBenchConfig& config) {
    config.experiment.validate();
    auto mdp = std::make_shared<const SailingMdp>(config.sailing);
    const std::vector<StateId> starts = mdp->non_goal_states();
    const int h = mdp->horizon();
    const OracleTable oracle = config.cache_dir.empty()
                                   ? build_oracle(*mdp, h, starts, config.oracle_cap)
                                   : cached_oracle(*mdp, h, starts, config.cache_dir, config.oracle_cap);
    const double scale = mdp->native_scale();
    const std::uint64_t seed = config.experiment.seed;
    return run_trials("sailing", config.experiment, [&](std::uint64_t trial) {
        RngStream rng(seed, derive_stream_id({kInitialStateTag, trial}));
        const StateId root = starts[rng.uniform_index(starts.size())];
        TrialSetup ts;
        ts.mdp = mdp;
        ts.root = root;
        ts.error = [&oracle, root, h, scale](ActionId a) {
            return scale * simple_regret(oracle, root, h, a);
        };
        return ts;
    });
}

// ---------------------------------------------------------------- game trees

std::string GameTreeBenchConfig::to_text() const {
    std::ostringstream out;
    out << experiment_text(experiment) << "branching = " << branching << '\n'
        << "depth = " << depth << '\n'
        << "leaf-cap = " << leaf_cap << '\n';
    return out.str();
}

std::uint64_t gametree_trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return mix64(seed ^ derive_stream_id({kTreeTag, trial}));
}

BenchResult run_gametree_bench(const GameTreeBenchConfig& config) {
    config.experiment.validate();
    GameTreeSpec probe;
    probe.branching = config.branching;
    probe.depth = config.depth;
    probe.validate();
    const double leaves = std::pow(static_cast<double>(config.branching), config.depth);
    if (leaves > static_cast<double>(config.leaf_cap)) {
        throw ResourceError("game tree has " + format_real(leaves) + " leaves, above the cap " +
                                std::to_string(config.leaf_cap),
                            static_cast<std::uint64_t>(std::min(leaves, 1.8e19)), config.leaf_cap);
    }
    return run_trials("gametree", config.experiment, [&](std::uint64_t trial) {
        GameTreeSpec spec = probe;
        spec.tree_seed = gametree_trial_seed(config.experiment.seed, trial);
        auto mdp = std::make_shared<const GameTreeMdp>(spec);
        auto oracle = std::make_shared<const OracleTable>(minimax_oracle(spec, config.leaf_cap));
        const StateId root = mdp->root();
        TrialSetup ts;
        ts.mdp = mdp;
        ts.root = root;
        ts.error = [oracle, root, d = spec.depth](ActionId a) { return simple_regret(*oracle, root, d, a); };
        return ts;
    });
}

// ---------------------------------------------------------------- sandbox

std::string SandboxConfig::to_text() const {
    std::ostringstream out;
    out << experiment_text(experiment) << "mdp = \"" << mdp << "\"\n";
    if (mdp == "random") {
        out << "mdp-seed = " << mdp_seed << '\n'
            << "mdp-actions = " << random_spec.actions << '\n'
            << "mdp-outcomes = " << random_spec.outcomes << '\n'
            << "mdp-horizon = " << random_spec.horizon << '\n';
    }
    return out.str();
}

std::unique_ptr<TabularMdp> sandbox_mdp(const SandboxConfig& config) {
    if (config.mdp == "tiny") {
        return std::make_unique<TabularMdp>(tiny_benchmark_mdp());
    }
    if (config.mdp == "random") {
        return std::make_unique<TabularMdp>(random_tabular_mdp(config.random_spec, config.mdp_seed));
    }
    throw ConfigError("unknown sandbox mdp '" + config.mdp + "' (expected tiny or random)");
}

SandboxConfig SandboxConfig::resolved() const {
    SandboxConfig out = *this;
    if (out.experiment.algorithms.empty()) {
        out.experiment.algorithms = {parse_planner("naive"), parse_planner("crafty")};
    }
    if (out.experiment.budgets.empty()) {
        const auto mdp = sandbox_mdp(out);
        const std::uint64_t cap = out.experiment.algorithms.front().policy_cap;
        const std::uint64_t sweep =
            enumerate_flat_policies(*mdp, mdp->start(), mdp->horizon(), cap).size();
        for (std::uint64_t k = 1; k <= 8; ++k) {
            out.experiment.budgets.push_back(k * sweep);
        }
    }
    return out;
}

BenchResult run_sandbox(const SandboxConfig& config) {
    const SandboxConfig full = config.resolved();
    std::shared_ptr<const TabularMdp> mdp = sandbox_mdp(full);
    const StateId root = mdp->start();
    const int h = mdp->horizon();
    const std::vector<StateId> starts = {root};
    auto oracle = std::make_shared<const OracleTable>(build_oracle(*mdp, h, starts));
    const ExperimentConfig& experiment = full.experiment;
    return run_trials("sandbox", experiment, [&](std::uint64_t) {
        TrialSetup ts;
        ts.mdp = mdp;
        ts.root = root;
        ts.error = [oracle, root, h](ActionId a) { return simple_regret(*oracle, root, h, a); };
        return ts;
    });
}

// ---------------------------------------------------------------- output

std::string version_string() { return BRUE_VERSION; }

void write_metadata(std::ostream& out, const std::string& command, std::uint64_t seed,
                    const std::string& resolved_config) {
    out << "# command: " << command << '\n'
        << "# version: " << version_string() << '\n'
        << "# seed: " << seed << '\n'
        << "# config_hash: " << format_hex64(fnv1a64(resolved_config)) << '\n';
    std::istringstream lines(resolved_config);
    for (std::string line; std::getline(lines, line);) {
        out << "# config: " << line << '\n';
    }
}

void write_bench_csv(std::ostream& out, const BenchResult& result, const std::string& command,
                     const std::string& resolved_config, const ExperimentConfig& config) {
    write_metadata(out, command, config.seed, resolved_config);
    out << "row_type,domain,algorithm,budget,trial,initial_state,action,error,std_error,optimal,count,"
           "fallback";
    if (config.timing) {
        out << ",wall_time_s";
    }
    out << '\n';
    for (const BenchmarkRecord& r : result.records) {
        out << "detail," << r.domain << ',' << csv_field(r.algorithm) << ',' << r.budget << ',' << r.trial << ','
            << r.initial_state.value << ',' << r.action << ',' << format_real(r.error) << ",,"
            << (r.optimal ? 1 : 0) << ",1," << (r.fallback ? 1 : 0);
        if (config.timing) {
            out << ',' << format_real(r.wall_time_s);
        }
        out << '\n';
    }
    for (const SummaryRecord& s : result.summaries) {
        out << "summary," << result.domain << ',' << csv_field(s.algorithm) << ',' << s.budget << ",,,,"
            << format_real(s.mean_error) << ',' << format_real(s.std_error) << ','
            << format_real(s.optimal_rate) << ',' << s.count << ',' << s.fallbacks;
        if (config.timing) {
            out << ',';
        }
        out << '\n';
    }
}

} // namespace brue
