#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brue/mdp.hpp"

namespace brue {

/// Explicit transition tables: transitions[s][a] lists the outcomes of a at s.
/// A state with no actions is terminal.
struct TabularModel {
    std::vector<std::vector<std::vector<Outcome>>> transitions;
    std::vector<bool> minimizing; ///< optional; empty means all maximize
    int horizon = 1;
    StateId start{0};
    std::string label = "tabular";
};

class TabularMdp final : public GenerativeMdp {
public:
    explicit TabularMdp(TabularModel model);

    const TabularModel& model() const noexcept { return model_; }
    StateId start() const noexcept { return model_.start; }
    std::size_t state_count() const noexcept { return model_.transitions.size(); }

    std::string_view name() const override { return model_.label; }
    int horizon() const override { return model_.horizon; }
    RewardRange reward_range() const override { return range_; }
    std::size_t num_actions(StateId s) const override;
    Transition sample_transition(StateId s, ActionId a, RngStream& rng) const override;
    bool is_enumerable() const override { return true; }
    std::vector<Outcome> enumerate_outcomes(StateId s, ActionId a) const override;
    bool minimizes(StateId s) const override;
    std::string config_text() const override;

private:
    TabularModel model_;
    RewardRange range_;
};

/// Layered random MDP: every non-final state has `actions` actions with
/// `outcomes` successors each; successors are fresh states or, with
/// probability `merge_prob`, states already created in the next layer.
struct RandomMdpSpec {
    int actions = 2;
    int outcomes = 2;
    int horizon = 2;
    double merge_prob = 0.0;
    double terminal_prob = 0.0; ///< chance a fresh successor is a sink
    double reward_min = 0.0;
    double reward_max = 1.0;
};

TabularMdp random_tabular_mdp(const RandomMdpSpec& spec, std::uint64_t seed);

/// One decision with Bernoulli-reward arms; horizon 1.
TabularMdp bernoulli_bandit_mdp(const std::vector<double>& success_probs);

/**
 * Fixed K=2, B=2, H=3 tree-structured MDP with rewards in [0, 1], a
 * one-step gap of at least 0.1 and a narrow gap at the root. Used by the
 * convergence and flat-policy experiments.
 */
TabularMdp tiny_benchmark_mdp();

} // namespace brue
