#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "brue/flat_policy.hpp"
#include "brue/mdp.hpp"
#include "brue/rng.hpp"
#include "brue/search_tree.hpp"

namespace brue {

enum class Algorithm {
    uct,
    gct, ///< epsilon-greedy at the root, UCB1 below
    brue,
    brue_alpha,
    brue_per_alpha,
    naive_uniform,
    crafty_uniform,
};

enum class ExplorationMode {
    fixed,          ///< constant c
    empirical_best, ///< c = |best Q-hat at the node|
};

enum class UpdateMode { strict, permissive };

enum class Recommendation { max_value, max_visits };

/// Where a sample past the tree stops: at depth H, or at a terminal state.
enum class RolloutEnd { horizon, terminal };

/// Step cap of terminal-bound samples, as a multiple of H.
inline constexpr int kTerminalRolloutFactor = 10;

struct PlannerConfig {
    Algorithm algorithm = Algorithm::brue;
    ExplorationMode exploration = ExplorationMode::empirical_best;
    double exploration_c = 1.0;
    double epsilon = 0.5;
    double alpha = 1.0;
    UpdateMode update = UpdateMode::strict;
    Keying keying = Keying::automatic;
    Recommendation uct_recommendation = Recommendation::max_value;
    /// UCT rollouts and BRUE estimation phases; exploration always stops by H.
    RolloutEnd rollout_end = RolloutEnd::horizon;
    std::uint64_t policy_cap = 1u << 20; ///< flat-policy planners only

    /// Throws ConfigError.
    void validate() const;
};

/**
 * Parses "name[:arg,...]". Names: uct, gct, brue, brue-alpha, brue-per-alpha
 * (alias brue-per), naive, crafty. A bare numeric argument is epsilon for gct
 * and alpha for the brue-alpha variants; keyed arguments are c=auto|<real>,
 * eps=, alpha=, keying=dag|tree|auto, recommend=value|visits, rollout=horizon|terminal, cap=.
 */
PlannerConfig parse_planner(std::string_view text);

/// Canonical text form; parse_planner(to_string(c)) reproduces c.
std::string to_string(const PlannerConfig& config);

/**
 * Parses a list such as "uct,gct:eps=0.5,c=auto;brue". Items are separated
 * by ',' or ';'; a piece that does not start with a planner name continues
 * the argument list of the previous item.
 */
std::vector<PlannerConfig> parse_planner_list(std::string_view text);

/// Joins canonical forms with ';'.
std::string to_string(const std::vector<PlannerConfig>& configs);

// Selection and update rules. `minimizing` flips the objective at MIN nodes.

/// Value from the point of view of the player to move.
inline double mover_value(double q, bool minimizing) noexcept {
    return minimizing ? -q : q;
}

/// UCB1 with unexplored-first: uniform among unvisited actions, else argmax of
/// mover value + c * sqrt(ln n(s) / n(s,a)) with uniform tie-breaking.
ActionId uct_select(std::span<const ActionStats> stats, double c, bool minimizing, RngStream& rng);

/// |max mover value| over visited actions; 1 when none is visited.
double empirical_best_coefficient(std::span<const ActionStats> stats, bool minimizing);

/// Running-mean update: n += 1; Q += (r - Q) / n.
void uct_update(ActionStats& stats, double ret) noexcept;

/// sigma(n) = H - ((n - 1) mod H), for n >= 1.
int brue_switch(std::uint64_t n, int horizon);

/// Appends r and sets Q to the mean of the last ceil(alpha * n) returns.
void brue_alpha_update(ActionStats& stats, double ret, double alpha);

/// Uniform among visited mover-value maximizers, or uniform over all actions
/// when none is visited.
ActionId greedy_select(std::span<const ActionStats> stats, bool minimizing, RngStream& rng);

/// Uniform among visited mover-value maximizers; nullopt when none is visited.
std::optional<ActionId> recommend_best(std::span<const ActionStats> stats, bool minimizing,
                                       RngStream& rng);

/// With probability epsilon uniform over all actions, otherwise greedy_select.
ActionId epsilon_greedy_select(std::span<const ActionStats> stats, double epsilon, bool minimizing,
                               RngStream& rng);

/// Permissive-update rule: some action is unvisited, or `chosen` is a current
/// mover-value maximizer.
bool permissive_update_applies(std::span<const ActionStats> stats, ActionId chosen, bool minimizing);

/// Called for every statistics update: node, action, credited return.
using UpdateObserver = std::function<void(SearchTree::NodeIndex, ActionId, double)>;

/// One online planning episode from a fixed root state.
class Planner {
public:
    virtual ~Planner() = default;

    /// One sample / expand / update round.
    virtual void run_iteration() = 0;

    /// Throws InsufficientBudget if nothing can be recommended yet. Ties are
    /// broken with the planner's own stream.
    virtual ActionId recommend() = 0;

    /// As recommend(), breaking ties with `rng` so the search stream is untouched.
    virtual ActionId recommend(RngStream& rng) const = 0;

    std::uint64_t iterations() const noexcept { return iterations_; }
    const Trajectory& last_trajectory() const noexcept { return trajectory_; }
    std::size_t last_update_count() const noexcept { return last_updates_; }

    /// Null for planners that do not grow a search tree.
    virtual const SearchTree* tree() const { return nullptr; }

    void set_observer(UpdateObserver observer) { observer_ = std::move(observer); }

protected:
    void notify(SearchTree::NodeIndex node, ActionId a, double ret) {
        ++last_updates_;
        if (observer_) {
            observer_(node, a, ret);
        }
    }

    std::uint64_t iterations_ = 0;
    std::size_t last_updates_ = 0;
    Trajectory trajectory_;

private:
    UpdateObserver observer_;
};

/// UCT and epsilon-greedy+UCT.
class UctPlanner final : public Planner {
public:
    UctPlanner(const GenerativeMdp& mdp, StateId root, int horizon, const PlannerConfig& config,
               RngStream rng);

    void run_iteration() override;
    ActionId recommend() override { return recommend(rng_); }
    ActionId recommend(RngStream& rng) const override;
    const SearchTree* tree() const override { return &tree_; }

private:
    double coefficient(SearchTree::NodeIndex node) const;

    const GenerativeMdp& mdp_;
    int horizon_;
    PlannerConfig config_;
    RngStream rng_;
    SearchTree tree_;
    std::vector<SearchTree::NodeIndex> path_;
};

/// BRUE, BRUE(alpha) and the permissive BRUE_per(alpha).
class BruePlanner final : public Planner {
public:
    BruePlanner(const GenerativeMdp& mdp, StateId root, int horizon, const PlannerConfig& config,
                RngStream rng);

    void run_iteration() override;
    ActionId recommend() override { return recommend(rng_); }
    ActionId recommend(RngStream& rng) const override;
    const SearchTree* tree() const override { return &tree_; }

private:
    void credit(SearchTree::NodeIndex node, ActionId a, double ret);

    const GenerativeMdp& mdp_;
    int horizon_;
    PlannerConfig config_;
    RngStream rng_;
    SearchTree tree_;
    std::vector<SearchTree::NodeIndex> path_;
};

/**
 * NaiveUniform and CraftyUniform over the enumerated flat policies. Naive
 * samples the policies round-robin; Crafty rolls out uniformly and credits
 * every policy consistent with the trajectory. Throws ResourceError above the
 * policy cap and CapabilityError on models with minimizing states.
 */
class FlatUniformPlanner final : public Planner {
public:
    FlatUniformPlanner(const GenerativeMdp& mdp, StateId root, int horizon,
                       const PlannerConfig& config, RngStream rng);

    void run_iteration() override;
    ActionId recommend() override { return recommend(rng_); }
    ActionId recommend(RngStream& rng) const override;

    std::size_t policy_count() const noexcept { return policies_.size(); }
    const FlatPolicy& policy(std::size_t i) const { return policies_[i]; }
    const ActionStats& policy_stats(std::size_t i) const { return stats_[i]; }

private:
    void credit(std::size_t policy, double ret);

    const GenerativeMdp& mdp_;
    StateId root_;
    int horizon_;
    bool crafty_;
    RngStream rng_;
    std::vector<FlatPolicy> policies_;
    std::vector<ActionStats> stats_;
    // Crafty: for every (decision point, action) a bitset over policies.
    std::map<DecisionPoint, std::size_t> point_index_;
    std::vector<std::size_t> point_first_row_;
    std::vector<std::uint64_t> rows_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> scratch_;
};

std::unique_ptr<Planner> make_planner(const GenerativeMdp& mdp, StateId root,
                                      const PlannerConfig& config, RngStream rng);

/// Runs exactly `budget` iterations of the configured planner from `root`
/// (horizon = mdp.horizon()) and returns its recommendation.
ActionId mcts_plan(const GenerativeMdp& mdp, StateId root, std::uint64_t budget,
                   const PlannerConfig& config, RngStream rng);

} // namespace brue
