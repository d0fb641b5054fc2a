#include "brue/search_tree.hpp"

#include "brue/errors.hpp"

namespace brue {

SearchTree::SearchTree(const GenerativeMdp& mdp, StateId root, Keying keying)
    : mdp_(&mdp), keying_(keying) {
    if (keying_ == Keying::automatic) {
        keying_ = mdp.prefers_tree_keying() ? Keying::tree : Keying::dag;
    }
    if (mdp.is_terminal(root)) {
        throw ContractViolation("search tree: root state is terminal");
    }
    create(root, 0);
}

std::uint64_t SearchTree::visits(NodeIndex i) const {
    std::uint64_t n = 0;
    for (const ActionStats& st : stats(i)) {
        n += st.visits;
    }
    return n;
}

SearchTree::Key SearchTree::key_for(NodeIndex parent, ActionId action, StateId child) const {
    if (keying_ == Keying::dag) {
        return {child.value, static_cast<std::uint64_t>(nodes_[parent].depth + 1)};
    }
    return {child.value, (1ull << 63) | (static_cast<std::uint64_t>(parent) << 24) | action};
}

SearchTree::NodeIndex SearchTree::find_child(NodeIndex parent, ActionId action, StateId child) const {
    if (parent == npos) {
        return npos;
    }
    const auto it = index_.find(key_for(parent, action, child));
    return it == index_.end() ? npos : it->second;
}

SearchTree::NodeIndex SearchTree::add_child(NodeIndex parent, ActionId action, StateId child) {
    const Key key = key_for(parent, action, child);
    if (const auto it = index_.find(key); it != index_.end()) {
        return it->second;
    }
    const NodeIndex i = create(child, nodes_[parent].depth + 1);
    index_.emplace(key, i);
    return i;
}

SearchTree::NodeIndex SearchTree::create(StateId state, int depth) {
    Node n;
    n.state = state;
    n.depth = depth;
    n.minimizing = mdp_->minimizes(state);
    n.first_stat = static_cast<std::uint32_t>(stats_.size());
    n.action_count = static_cast<std::uint32_t>(mdp_->num_actions(state));
    stats_.resize(stats_.size() + n.action_count);
    nodes_.push_back(n);
    const auto i = static_cast<NodeIndex>(nodes_.size() - 1);
    if (i == 0) {
        index_.emplace(Key{state.value, keying_ == Keying::dag ? 0ull : (1ull << 62)}, i);
    }
    return i;
}

} // namespace brue
