#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brue/rng.hpp"

namespace brue {

/// Dense handle for a domain state. Each domain owns the encoding.
struct StateId {
    std::uint64_t value = 0;

    friend constexpr auto operator<=>(const StateId&, const StateId&) = default;
};

/// Index into the applicable-action list of a state: 0..num_actions(s)-1.
using ActionId = std::uint32_t;

struct Transition {
    StateId next;
    double reward = 0.0;
};

struct Outcome {
    StateId next;
    double probability = 0.0;
    double reward = 0.0;
};

struct RewardRange {
    double min = 0.0;
    double max = 0.0;
};

/**
 * Generative model of a finite-horizon MDP.
 *
 * Rewards are always maximized; cost domains publish reward = -cost.
 * Adversarial domains mark the states where the player to move minimizes.
 * Implementations are immutable after construction and safe for concurrent
 * reads.
 */
class GenerativeMdp {
public:
    virtual ~GenerativeMdp() = default;

    virtual std::string_view name() const = 0;
    virtual int horizon() const = 0;

    /// Bounds on a single-step reward.
    virtual RewardRange reward_range() const = 0;

    /// Zero iff the state is terminal.
    virtual std::size_t num_actions(StateId s) const = 0;

    virtual Transition sample_transition(StateId s, ActionId a, RngStream& rng) const = 0;

    virtual bool is_terminal(StateId s) const { return num_actions(s) == 0; }

    virtual bool is_enumerable() const { return false; }

    /// Outcomes with positive probabilities summing to one. Throws
    /// CapabilityError unless is_enumerable().
    virtual std::vector<Outcome> enumerate_outcomes(StateId s, ActionId a) const;

    /// True when the player to move at `s` minimizes (MIN nodes of game trees).
    virtual bool minimizes(StateId /*s*/) const { return false; }

    /// Whether planners should key nodes by path instead of (state, depth).
    virtual bool prefers_tree_keying() const { return false; }

    /// Factor converting planner reward units into reporting units.
    virtual double native_scale() const { return 1.0; }

    /// Canonical, human-readable configuration; hashed into cache keys.
    virtual std::string config_text() const = 0;

    virtual std::string describe_state(StateId s) const;

    std::vector<ActionId> applicable_actions(StateId s) const;

    std::uint64_t config_hash() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Sampled rollout <s0, a1, s1, ..., ak, sk> with per-step rewards.
struct Trajectory {
    std::vector<StateId> states;
    std::vector<ActionId> actions;
    std::vector<double> rewards;
    /// Switching depth sigma(n) for two-phase planners.
    std::optional<int> switch_index;

    std::size_t length() const noexcept { return actions.size(); }

    /// Sum of rewards[i..k-1].
    double reward_to_go(std::size_t i) const noexcept;

    void clear() noexcept {
        states.clear();
        actions.clear();
        rewards.clear();
        switch_index.reset();
    }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Checks the length relations and the termination rule against `mdp`.
bool satisfies_trajectory_invariants(const Trajectory& t, const GenerativeMdp& mdp, int horizon);

/// Chooses an action at `state`, which sits `depth` steps below the start.
using ActionSelector = std::function<ActionId(StateId state, int depth, RngStream& rng)>;

/**
 * Samples a trajectory from `start`, stopping at a terminal state or after
 * `max_depth` steps. Throws ContractViolation if the selector returns an
 * inapplicable action.
 */
Trajectory rollout(const GenerativeMdp& mdp, StateId start, const ActionSelector& policy,
                   int max_depth, RngStream& rng);

} // namespace brue

template <>
struct std::hash<brue::StateId> {
    std::size_t operator()(const brue::StateId& s) const noexcept {
        return static_cast<std::size_t>(brue::mix64(s.value));
    }
};
