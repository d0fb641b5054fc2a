#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brue/mdp.hpp"

namespace brue {

/**
 * Random two-player game tree.
 *
 * MAX moves at even depths (root included) carry values in [0, 127], MIN
 * moves at odd depths values in [-127, 0]. A leaf pays the sum of the move
 * values on its path. Values come from a counter-based hash of
 * (tree_seed, node), so the tree is never materialized.
 */
struct GameTreeSpec {
    int branching = 2;
    int depth = 2;
    std::uint64_t tree_seed = 0;
    /// Optional hand-built values: entry l-1 holds the B^l move values
    /// leading into depth l, in left-to-right order.
    std::vector<std::vector<int>> explicit_edges;

    void validate() const;
    std::string to_text() const;

    /// Leaf payoff bounds: [-127 * floor(D/2), 127 * ceil(D/2)].
    int min_payoff() const { return -127 * (depth / 2); }
    int max_payoff() const { return 127 * ((depth + 1) / 2); }
};

class GameTreeMdp final : public GenerativeMdp {
public:
    explicit GameTreeMdp(GameTreeSpec spec);

    const GameTreeSpec& spec() const noexcept { return spec_; }

    std::string_view name() const override { return "gametree"; }
    int horizon() const override { return spec_.depth; }
    RewardRange reward_range() const override { return {0.0, 1.0}; }
    std::size_t num_actions(StateId s) const override;
    Transition sample_transition(StateId s, ActionId a, RngStream& rng) const override;
    bool is_enumerable() const override { return true; }
    std::vector<Outcome> enumerate_outcomes(StateId s, ActionId a) const override;
    bool minimizes(StateId s) const override { return depth_of(s) % 2 == 1; }
    bool prefers_tree_keying() const override { return true; }
    double native_scale() const override { return payoff_span(); }
    std::string config_text() const override { return spec_.to_text(); }
    std::string describe_state(StateId s) const override;

    StateId root() const { return node(0, 0); }
    StateId child(StateId s, ActionId a) const;

    static int depth_of(StateId s) { return static_cast<int>(s.value >> 56); }
    static std::uint64_t position_of(StateId s) { return s.value & ((1ull << 56) - 1); }
    static StateId node(int depth, std::uint64_t position) {
        return StateId{(static_cast<std::uint64_t>(depth) << 56) | position};
    }

    /// Value of the move leading into `s` (s must not be the root).
    int edge_value(StateId s) const;

    /// Raw path sum of a leaf.
    int payoff(StateId leaf) const;

    /// Planner reward of a raw payoff: affine map of the payoff range onto [0, 1].
    double scaled(int payoff) const {
        return (payoff - spec_.min_payoff()) / payoff_span();
    }

    double payoff_span() const {
        return static_cast<double>(spec_.max_payoff() - spec_.min_payoff());
    }

private:
    GameTreeSpec spec_;
};

} // namespace brue
