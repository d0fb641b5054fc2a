#include "brue/mdp.hpp"

#include <numeric>

#include "brue/errors.hpp"

namespace brue {

std::vector<Outcome> GenerativeMdp::enumerate_outcomes(StateId, ActionId) const {
    throw CapabilityError(std::string(name()) + ": outcome enumeration not supported");
}

std::string GenerativeMdp::describe_state(StateId s) const {
    return std::to_string(s.value);
}

std::vector<ActionId> GenerativeMdp::applicable_actions(StateId s) const {
    std::vector<ActionId> actions(num_actions(s));
    std::iota(actions.begin(), actions.end(), ActionId{0});
    return actions;
}

std::uint64_t GenerativeMdp::config_hash() const {
    return fnv1a64(config_text());
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double Trajectory::reward_to_go(std::size_t i) const noexcept {
    double total = 0.0;
    for (std::size_t j = i; j < rewards.size(); ++j) {
        total += rewards[j];
    }
    return total;
}

bool satisfies_trajectory_invariants(const Trajectory& t, const GenerativeMdp& mdp, int horizon) {
    if (t.states.size() != t.actions.size() + 1 || t.rewards.size() != t.actions.size()) {
        return false;
    }
    const auto k = static_cast<int>(t.length());
    if (k > horizon) {
        return false;
    }
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
        if (mdp.is_terminal(t.states[i]) || t.actions[i] >= mdp.num_actions(t.states[i])) {
            return false;
        }
    }
    return k == horizon || mdp.is_terminal(t.states.back());
}

Trajectory rollout(const GenerativeMdp& mdp, StateId start, const ActionSelector& policy,
                   int max_depth, RngStream& rng) {
    if (max_depth < 1) {
        throw ContractViolation("rollout: max_depth must be at least 1");
    }
    if (mdp.is_terminal(start)) {
        throw ContractViolation("rollout: start state is terminal");
    }
    Trajectory t;
    t.states.push_back(start);
    StateId s = start;
    for (int depth = 0; depth < max_depth && !mdp.is_terminal(s); ++depth) {
        const ActionId a = policy(s, depth, rng);
        if (a >= mdp.num_actions(s)) {
            throw ContractViolation("rollout: policy returned an inapplicable action");
        }
        const Transition tr = mdp.sample_transition(s, a, rng);
        t.actions.push_back(a);
        t.rewards.push_back(tr.reward);
        t.states.push_back(tr.next);
        s = tr.next;
    }
    return t;
}

} // namespace brue
