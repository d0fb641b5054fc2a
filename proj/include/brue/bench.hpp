#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "brue/gametree.hpp"
#include "brue/mdp.hpp"
#include "brue/oracle.hpp"
#include "brue/planner.hpp"
#include "brue/sailing.hpp"
#include "brue/tabular.hpp"

namespace brue {

/// Settings shared by every benchmark.
struct ExperimentConfig {
    std::vector<PlannerConfig> algorithms;
    std::vector<std::uint64_t> budgets; ///< strictly increasing iteration counts
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    bool timing = false; ///< record wall time (makes output machine dependent)

    /// Throws ConfigError.
    void validate() const;
};

/// Powers of two 2^lo .. 2^hi.
std::vector<std::uint64_t> power_of_two_budgets(int lo, int hi);

/// One (algorithm, budget, trial) measurement.
struct BenchmarkRecord {
    std::string domain;
    std::string algorithm;
    std::uint64_t budget = 0;
    std::uint64_t trial = 0;
    StateId initial_state;
    ActionId action = 0;
    /// V(s0) - Q(s0, action) in the domain's reporting units; >= 0.
    double error = 0.0;
    bool optimal = false;
    /// The planner had no recommendation and a uniform action was used.
    bool fallback = false;
    double wall_time_s = 0.0;
};

struct SummaryRecord {
    std::string algorithm;
    std::uint64_t budget = 0;
    double mean_error = 0.0;
    double std_error = 0.0;
    double optimal_rate = 0.0;
    std::uint64_t count = 0;
    std::uint64_t fallbacks = 0;
};

struct BenchResult {
    std::string domain;
    std::vector<BenchmarkRecord> records; ///< ordered by algorithm, budget, trial
    std::vector<SummaryRecord> summaries; ///< ordered by algorithm, budget

    /// Errors of one (algorithm, budget) cell in trial order.
    std::vector<double> errors(std::size_t algorithm, std::size_t budget) const;
    std::vector<double> choice_errors(std::size_t algorithm, std::size_t budget) const;
    const SummaryRecord& summary(std::size_t algorithm, std::size_t budget) const;

    std::size_t algorithm_count = 0;
    std::size_t budget_count = 0;
    std::uint64_t trials = 0;
};

/// What a trial plans on and how its recommendation is scored.
struct TrialSetup {
    std::shared_ptr<const GenerativeMdp> mdp;
    StateId root;
    /// Error of `a` in reporting units.
    std::function<double(ActionId)> error;
};

/**
 * Runs every algorithm on every trial. Each (trial, algorithm) pair runs one
 * planner up to the largest budget and records its recommendation at every
 * budget on the grid, drawing recommendation tie-breaks from a separate
 * stream so recording does not perturb the search. Deterministic in the
 * master seed for any job count.
 */
BenchResult run_trials(const std::string& domain, const ExperimentConfig& config,
                       const std::function<TrialSetup(std::uint64_t trial)>& setup);

struct SailingBenchConfig {
    ExperimentConfig experiment;
    SailingConfig sailing;
    std::filesystem::path cache_dir; ///< empty disables the on-disk cache
    std::uint64_t oracle_cap = kDefaultOracleCap;

    std::string to_text() const;
};

/// Random non-goal initial state per trial, scored against the exact oracle.
BenchResult run_sailing_bench(const SailingBenchConfig& config);

struct GameTreeBenchConfig {
    ExperimentConfig experiment;
    int branching = 2;
    int depth = 10;
    std::uint64_t leaf_cap = 1ull << 24;

    std::string to_text() const;
};

/// Tree seed of trial `trial` under master seed `seed`.
std::uint64_t gametree_trial_seed(std::uint64_t seed, std::uint64_t trial);

/// A fresh random tree per trial; error in raw payoff units.
BenchResult run_gametree_bench(const GameTreeBenchConfig& config);

struct SandboxConfig {
    ExperimentConfig experiment; ///< empty budgets select sweeps 1..8
    /// "tiny" or "random" (random_tabular_mdp(random_spec, mdp_seed)).
    std::string mdp = "tiny";
    RandomMdpSpec random_spec{2, 2, 2};
    std::uint64_t mdp_seed = 1;

    /// Copy with the default algorithms and budgets filled in.
    SandboxConfig resolved() const;
    std::string to_text() const;
};

std::unique_ptr<TabularMdp> sandbox_mdp(const SandboxConfig& config);

/// Repeated planning from the sandbox MDP's start state; error = simple regret.
BenchResult run_sandbox(const SandboxConfig& config);

/// Library version recorded in output metadata.
std::string version_string();

/**
 * CSV with a '#' metadata block (command, version, master seed, config hash,
 * resolved config), a header row, detail rows and summary rows. Reals use 17
 * significant digits; the wall_time_s column appears only when timing.
 */
void write_bench_csv(std::ostream& out, const BenchResult& result, const std::string& command,
                     const std::string& resolved_config, const ExperimentConfig& config);

/// Metadata block shared by every CSV the tools write.
void write_metadata(std::ostream& out, const std::string& command, std::uint64_t seed,
                    const std::string& resolved_config);

} // namespace brue
