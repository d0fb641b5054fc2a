#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "brue/mdp.hpp"

namespace brue {

/// A state with its depth below the planning root. Ordered by depth first,
/// so the root precedes every other point.
struct DecisionPoint {
    int depth = 0;
    StateId state;

    friend constexpr auto operator<=>(const DecisionPoint&, const DecisionPoint&) = default;
};

/**
 * Minimal partial mapping from decision points to actions: defined exactly
 * on the points reachable from the root when acting by the policy itself.
 * Entries are sorted by decision point.
 */
struct FlatPolicy {
    std::vector<std::pair<DecisionPoint, ActionId>> entries;

    std::optional<ActionId> action_at(DecisionPoint p) const;
    ActionId root_action() const { return entries.front().second; }

    friend bool operator==(const FlatPolicy&, const FlatPolicy&) = default;
};

/// K^(1 + B + ... + B^(H-1)), saturated at UINT64_MAX.
std::uint64_t flat_policy_count_bound(std::uint64_t K, std::uint64_t B, int H);

/**
 * All flat policies of an enumerable MDP from `root` over `horizon` steps,
 * in a fixed canonical order. Throws CapabilityError for non-enumerable
 * models and ResourceError once more than `cap` policies are produced.
 */
std::vector<FlatPolicy> enumerate_flat_policies(const GenerativeMdp& mdp, StateId root, int horizon,
                                                std::uint64_t cap);

/// Exact expected return of acting by `policy` for `horizon` steps.
double flat_policy_value(const GenerativeMdp& mdp, StateId root, int horizon,
                         const FlatPolicy& policy);

} // namespace brue
