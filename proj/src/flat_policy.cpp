#include "brue/flat_policy.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "brue/errors.hpp"

namespace brue {

std::optional<ActionId> FlatPolicy::action_at(DecisionPoint p) const {
    const auto it = std::lower_bound(entries.begin(), entries.end(), p,
                                     [](const auto& e, const DecisionPoint& q) { return e.first < q; });
    if (it == entries.end() || it->first != p) {
        return std::nullopt;
    }
    return it->second;
}

std::uint64_t flat_policy_count_bound(std::uint64_t K, std::uint64_t B, int H) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t exponent = 0;
    std::uint64_t layer = 1;
    for (int i = 0; i < H; ++i) {
        exponent += layer;
        if (B != 0 && layer > kMax / B) {
            return kMax;
        }
        layer *= B;
    }
    std::uint64_t count = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        if (K != 0 && count > kMax / K) {
            return kMax;
        }
        count *= K;
    }
    return count;
}

namespace {

class Enumerator {
public:
    Enumerator(const GenerativeMdp& mdp, int horizon, std::uint64_t cap)
        : mdp_(mdp), horizon_(horizon), cap_(cap) {}

    void run(StateId root) {
        std::set<DecisionPoint> pending{{0, root}};
        std::map<DecisionPoint, ActionId> assigned;
        recurse(pending, assigned);
    }

    std::vector<FlatPolicy> take() { return std::move(out_); }

private:
    void recurse(std::set<DecisionPoint>& pending, std::map<DecisionPoint, ActionId>& assigned) {
        if (pending.empty()) {
            if (out_.size() >= cap_) {
                throw ResourceError("flat policy count exceeds cap " + std::to_string(cap_),
                                    out_.size() + 1, cap_);
            }
            FlatPolicy p;
            p.entries.assign(assigned.begin(), assigned.end());
            out_.push_back(std::move(p));
            return;
        }
        const DecisionPoint point = *pending.begin();
        pending.erase(pending.begin());
        const auto k = static_cast<ActionId>(mdp_.num_actions(point.state));
        for (ActionId a = 0; a < k; ++a) {
            assigned.emplace(point, a);
            std::vector<DecisionPoint> added;
            if (point.depth + 1 < horizon_) {
                for (const Outcome& o : mdp_.enumerate_outcomes(point.state, a)) {
                    const DecisionPoint next{point.depth + 1, o.next};
                    if (mdp_.is_terminal(o.next) || assigned.contains(next) || pending.contains(next)) {
                        continue;
                    }
                    pending.insert(next);
                    added.push_back(next);
                }
            }
            recurse(pending, assigned);
            for (const DecisionPoint& q : added) {
                pending.erase(q);
            }
            assigned.erase(point);
        }
        pending.insert(point);
    }

    const GenerativeMdp& mdp_;
    int horizon_;
    std::uint64_t cap_;
    std::vector<FlatPolicy> out_;
};

double policy_value(const GenerativeMdp& mdp, DecisionPoint p, int horizon, const FlatPolicy& policy) {
    if (p.depth >= horizon || mdp.is_terminal(p.state)) {
        return 0.0;
    }
    const auto a = policy.action_at(p);
    if (!a) {
        throw ContractViolation("flat policy undefined at a reachable decision point");
    }
    double v = 0.0;
    for (const Outcome& o : mdp.enumerate_outcomes(p.state, *a)) {
        v += o.probability * (o.reward + policy_value(mdp, {p.depth + 1, o.next}, horizon, policy));
    }
    return v;
}

} // namespace

std::vector<FlatPolicy> enumerate_flat_policies(const GenerativeMdp& mdp, StateId root, int horizon,
                                                std::uint64_t cap) {
    if (!mdp.is_enumerable()) {
        throw CapabilityError(std::string(mdp.name()) + ": flat policies need outcome enumeration");
    }
    if (horizon < 1 || mdp.is_terminal(root)) {
        throw ContractViolation("flat policies need a positive horizon and a non-terminal root");
    }
    Enumerator e(mdp, horizon, cap);
    e.run(root);
    return e.take();
}

double flat_policy_value(const GenerativeMdp& mdp, StateId root, int horizon,
                         const FlatPolicy& policy) {
    return policy_value(mdp, {0, root}, horizon, policy);
}

} // namespace brue
