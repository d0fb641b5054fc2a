#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "brue/mdp.hpp"

namespace brue {

/// How search nodes are identified.
enum class Keying {
    automatic, ///< ask the domain (tree for game trees, DAG otherwise)
    dag,       ///< one node per (state, depth)
    tree,      ///< one node per path
};

/// Per (node, action) statistics.
struct ActionStats {
    std::uint64_t visits = 0;
    double value = 0.0;
    /// Credited returns in arrival order; kept only by planners that forget.
    std::vector<double> rewards;
};

/**
 * Search graph rooted at the planning state. Nodes carry one ActionStats per
 * applicable action. Terminal states and states at the horizon are never
 * stored: they have no decisions.
 */
class SearchTree {
public:
    using NodeIndex = std::uint32_t;
    static constexpr NodeIndex npos = std::numeric_limits<NodeIndex>::max();

    struct Node {
        StateId state;
        int depth = 0;
        bool minimizing = false;
        std::uint32_t first_stat = 0;
        std::uint32_t action_count = 0;
    };

    SearchTree(const GenerativeMdp& mdp, StateId root, Keying keying);

    Keying keying() const noexcept { return keying_; }
    NodeIndex root() const noexcept { return 0; }
    std::size_t size() const noexcept { return nodes_.size(); }

    const Node& node(NodeIndex i) const { return nodes_[i]; }

    std::span<ActionStats> stats(NodeIndex i) {
        const Node& n = nodes_[i];
        return {stats_.data() + n.first_stat, n.action_count};
    }
    std::span<const ActionStats> stats(NodeIndex i) const {
        const Node& n = nodes_[i];
        return {stats_.data() + n.first_stat, n.action_count};
    }

    /// n(s) = sum over actions of n(s, a).
    std::uint64_t visits(NodeIndex i) const;

    /// Node reached from `parent` by `action` landing in `child`, or npos.
    NodeIndex find_child(NodeIndex parent, ActionId action, StateId child) const;

    /// As find_child, creating the node when missing.
    NodeIndex add_child(NodeIndex parent, ActionId action, StateId child);

private:
    struct Key {
        std::uint64_t state;
        std::uint64_t tag;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return static_cast<std::size_t>(mix64(k.state ^ mix64(k.tag)));
        }
    };

    Key key_for(NodeIndex parent, ActionId action, StateId child) const;
    NodeIndex create(StateId state, int depth);

    const GenerativeMdp* mdp_;
    Keying keying_;
    std::vector<Node> nodes_;
    std::vector<ActionStats> stats_;
    std::unordered_map<Key, NodeIndex, KeyHash> index_;
};

} // namespace brue
