#include "brue/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "brue/errors.hpp"

namespace brue {

OracleTable::OracleTable(std::vector<Layer> layers, BoundParams params)
    : layers_(std::move(layers)), params_(params) {
    build_index();
}

void OracleTable::build_index() {
    index_.assign(layers_.size(), {});
    for (std::size_t h = 0; h < layers_.size(); ++h) {
        const Layer& layer = layers_[h];
        index_[h].reserve(layer.states.size());
        for (std::size_t i = 0; i < layer.states.size(); ++i) {
            index_[h].emplace(layer.states[i], static_cast<std::uint32_t>(i));
        }
    }
}

bool OracleTable::contains(StateId s, int h) const noexcept {
    return h >= 0 && h < static_cast<int>(index_.size()) && index_[static_cast<std::size_t>(h)].count(s) > 0;
}

std::size_t OracleTable::index_of(StateId s, int h) const {
    if (h >= 0 && h < static_cast<int>(index_.size())) {
        const auto& idx = index_[static_cast<std::size_t>(h)];
        if (auto it = idx.find(s); it != idx.end()) {
            return it->second;
        }
    }
    throw MissingOracleEntry("oracle has no entry for state " + std::to_string(s.value) +
                             " with " + std::to_string(h) + " steps to go");
}

double OracleTable::value(StateId s, int h) const {
    return layers_[static_cast<std::size_t>(h)].values[index_of(s, h)];
}

std::span<const double> OracleTable::q_values(StateId s, int h) const {
    const Layer& layer = layers_[static_cast<std::size_t>(h)];
    const std::size_t i = index_of(s, h);
    return std::span<const double>(layer.q).subspan(layer.q_begin[i],
                                                    layer.q_begin[i + 1] - layer.q_begin[i]);
}

double OracleTable::q(StateId s, int h, ActionId a) const {
    const auto qs = q_values(s, h);
    if (a >= qs.size()) {
        throw ContractViolation("oracle: action " + std::to_string(a) + " not applicable");
    }
    return qs[a];
}

ActionId OracleTable::optimal_action(StateId s, int h) const {
    return layers_[static_cast<std::size_t>(h)].best[index_of(s, h)];
}

bool OracleTable::minimizing(StateId s, int h) const {
    return layers_[static_cast<std::size_t>(h)].minimizing[index_of(s, h)] != 0;
}

bool OracleTable::is_optimal(StateId s, int h, ActionId a, double tol) const {
    const double gap = minimizing(s, h) ? q(s, h, a) - value(s, h) : value(s, h) - q(s, h, a);
    return gap <= tol;
}

std::size_t OracleTable::entry_count() const noexcept {
    std::size_t n = 0;
    for (const Layer& layer : layers_) {
        n += layer.states.size();
    }
    return n;
}

namespace {

using OutcomeMemo = std::unordered_map<StateId, std::vector<std::vector<Outcome>>>;

const std::vector<std::vector<Outcome>>& outcomes_of(const GenerativeMdp& mdp, StateId s,
                                                     OutcomeMemo& memo) {
    auto it = memo.find(s);
    if (it == memo.end()) {
        std::vector<std::vector<Outcome>> all(mdp.num_actions(s));
        for (ActionId a = 0; a < all.size(); ++a) {
            all[a] = mdp.enumerate_outcomes(s, a);
        }
        it = memo.emplace(s, std::move(all)).first;
    }
    return it->second;
}

/// Index of the best entry for the player to move; lowest index wins ties.
std::size_t best_index(std::span<const double> q, bool minimize) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < q.size(); ++i) {
        if (minimize ? q[i] < q[best] : q[i] > q[best]) {
            best = i;
        }
    }
    return best;
}

} // namespace

OracleTable build_oracle(const GenerativeMdp& mdp, int horizon, std::span<const StateId> starts,
                         std::uint64_t cap) {
    if (!mdp.is_enumerable()) {
        throw CapabilityError(std::string(mdp.name()) + ": oracle requires outcome enumeration");
    }
    if (horizon < 0) {
        throw ConfigError("oracle: negative horizon");
    }
    const auto H = static_cast<std::size_t>(horizon);

    // Forward pass: which states need a value with h steps to go.
    std::vector<std::vector<StateId>> reach(H + 1);
    reach[H].assign(starts.begin(), starts.end());
    std::sort(reach[H].begin(), reach[H].end());
    reach[H].erase(std::unique(reach[H].begin(), reach[H].end()), reach[H].end());

    OutcomeMemo memo;
    std::uint64_t cells = 0;
    for (std::size_t h = H; h >= 1; --h) {
        std::unordered_set<StateId> next;
        for (StateId s : reach[h]) {
            if (mdp.is_terminal(s)) {
                continue;
            }
            const auto& outs = outcomes_of(mdp, s, memo);
            cells += outs.size();
            if (cells > cap) {
                throw ResourceError("oracle: more than " + std::to_string(cap) +
                                        " Q cells required (cap exceeded)",
                                    cells, cap);
            }
            for (const auto& per_action : outs) {
                for (const Outcome& o : per_action) {
                    next.insert(o.next);
                }
            }
        }
        reach[h - 1].assign(next.begin(), next.end());
        std::sort(reach[h - 1].begin(), reach[h - 1].end());
    }

    // Backward induction.
    std::vector<OracleTable::Layer> layers(H + 1);
    std::unordered_map<StateId, double> prev_values;
    for (std::size_t h = 0; h <= H; ++h) {
        OracleTable::Layer& layer = layers[h];
        layer.states = reach[h];
        const std::size_t n = layer.states.size();
        layer.values.assign(n, 0.0);
        layer.best.assign(n, 0);
        layer.minimizing.assign(n, 0);
        layer.q_begin.assign(n + 1, 0);
        std::unordered_map<StateId, double> values;
        values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const StateId s = layer.states[i];
            layer.q_begin[i] = layer.q.size();
            const bool minimize = mdp.minimizes(s);
            layer.minimizing[i] = minimize ? 1 : 0;
            if (h > 0 && !mdp.is_terminal(s)) {
                const auto& outs = outcomes_of(mdp, s, memo);
                const std::size_t first = layer.q.size();
                for (const auto& per_action : outs) {
                    double q = 0.0;
                    for (const Outcome& o : per_action) {
                        q += o.probability * (o.reward + prev_values.at(o.next));
                    }
                    layer.q.push_back(q);
                }
                const std::span<const double> qs(layer.q.data() + first, outs.size());
                const std::size_t b = best_index(qs, minimize);
                layer.best[i] = static_cast<ActionId>(b);
                layer.values[i] = qs[b];
            }
            values.emplace(s, layer.values[i]);
        }
        layer.q_begin[n] = layer.q.size();
        prev_values = std::move(values);
    }

    OracleTable table(std::move(layers), BoundParams{});
    table.set_params(extract_params(mdp, table));
    return table;
}

BoundParams extract_params(const GenerativeMdp& mdp, const OracleTable& oracle) {
    BoundParams params;
    params.H = oracle.horizon();
    params.p = 1.0;
    params.d = std::numeric_limits<double>::infinity();
    const auto& layers = oracle.layers();
    for (std::size_t h = 1; h < layers.size(); ++h) {
        for (StateId s : layers[h].states) {
            const std::size_t k = mdp.num_actions(s);
            if (k == 0) {
                continue;
            }
            params.K = std::max(params.K, k);
            for (ActionId a = 0; a < k; ++a) {
                const auto outs = mdp.enumerate_outcomes(s, a);
                params.B = std::max(params.B, outs.size());
                for (const Outcome& o : outs) {
                    if (o.probability > 0.0) {
                        params.p = std::min(params.p, o.probability);
                    }
                }
            }
        }
    }
    if (layers.size() > 1) {
        for (StateId s : layers[1].states) {
            const auto qs = oracle.q_values(s, 1);
            if (qs.size() < 2) {
                continue;
            }
            std::vector<double> sorted(qs.begin(), qs.end());
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            const double gap = oracle.minimizing(s, 1) ? sorted[sorted.size() - 2] - sorted.back()
                                                        : sorted[0] - sorted[1];
            params.d = std::min(params.d, gap);
        }
    }
    if (!std::isfinite(params.d)) {
        params.d = 0.0; // no one-step decision with two actions
    }
    params.degenerate = params.d <= 0.0;
    return params;
}

double bellman_residual(const GenerativeMdp& mdp, const OracleTable& oracle) {
    double worst = 0.0;
    const auto& layers = oracle.layers();
    for (std::size_t h = 0; h < layers.size(); ++h) {
        const auto hi = static_cast<int>(h);
        for (std::size_t i = 0; i < layers[h].states.size(); ++i) {
            const StateId s = layers[h].states[i];
            const double v = layers[h].values[i];
            if (h == 0 || mdp.is_terminal(s)) {
                worst = std::max(worst, std::abs(v));
                continue;
            }
            const auto stored = oracle.q_values(s, hi);
            double best = oracle.minimizing(s, hi) ? std::numeric_limits<double>::infinity()
                                                    : -std::numeric_limits<double>::infinity();
            for (ActionId a = 0; a < mdp.num_actions(s); ++a) {
                double q = 0.0;
                for (const Outcome& o : mdp.enumerate_outcomes(s, a)) {
                    q += o.probability * (o.reward + oracle.value(o.next, hi - 1));
                }
                worst = std::max(worst, std::abs(q - stored[a]));
                best = oracle.minimizing(s, hi) ? std::min(best, q) : std::max(best, q);
            }
            worst = std::max(worst, std::abs(best - v));
        }
    }
    return worst;
}

OracleTable minimax_oracle(const GameTreeSpec& spec, std::uint64_t leaf_cap) {
    const GameTreeMdp tree(spec);
    const auto b = static_cast<std::uint64_t>(spec.branching);
    std::uint64_t leaves = 1;
    for (int i = 0; i < spec.depth; ++i) {
        leaves *= b;
        if (leaves > leaf_cap) {
            throw ResourceError("minimax oracle: tree has more than " + std::to_string(leaf_cap) +
                                    " leaves (leaf cap exceeded)",
                                leaves, leaf_cap);
        }
    }

    struct Row {
        StateId state;
        double value;
        ActionId best;
        bool minimize;
        std::vector<double> q;
    };
    std::vector<std::vector<Row>> rows(static_cast<std::size_t>(spec.depth) + 1);

    // Returns the minimax value-to-go of `s` in raw payoff units.
    auto solve = [&](auto&& self, StateId s) -> double {
        const int depth = GameTreeMdp::depth_of(s);
        const auto h = static_cast<std::size_t>(spec.depth - depth);
        if (h == 0) {
            rows[0].push_back({s, 0.0, 0, tree.minimizes(s), {}});
            return 0.0;
        }
        Row row{s, 0.0, 0, tree.minimizes(s), {}};
        row.q.reserve(b);
        for (ActionId a = 0; a < b; ++a) {
            const StateId c = tree.child(s, a);
            const double reward = h == 1 ? static_cast<double>(tree.payoff(c)) : 0.0;
            row.q.push_back(reward + self(self, c));
        }
        const std::size_t best = best_index(row.q, row.minimize);
        row.best = static_cast<ActionId>(best);
        row.value = row.q[best];
        const double v = row.value;
        rows[h].push_back(std::move(row));
        return v;
    };
    solve(solve, tree.root());

    std::vector<OracleTable::Layer> layers(rows.size());
    for (std::size_t h = 0; h < rows.size(); ++h) {
        auto& r = rows[h];
        std::sort(r.begin(), r.end(), [](const Row& x, const Row& y) { return x.state < y.state; });
        OracleTable::Layer& layer = layers[h];
        for (const Row& row : r) {
            layer.states.push_back(row.state);
            layer.values.push_back(row.value);
            layer.best.push_back(row.best);
            layer.minimizing.push_back(row.minimize ? 1 : 0);
            layer.q_begin.push_back(layer.q.size());
            layer.q.insert(layer.q.end(), row.q.begin(), row.q.end());
        }
        layer.q_begin.push_back(layer.q.size());
    }

    OracleTable table(std::move(layers), BoundParams{});
    BoundParams params;
    params.K = b;
    params.B = 1;
    params.p = 1.0;
    params.H = spec.depth;
    params.d = std::numeric_limits<double>::infinity();
    for (StateId s : table.layers()[1].states) {
        auto qs = table.q_values(s, 1);
        std::vector<double> sorted(qs.begin(), qs.end());
        std::sort(sorted.begin(), sorted.end());
        const double gap = table.minimizing(s, 1) ? sorted[1] - sorted[0]
                                                  : sorted.back() - sorted[sorted.size() - 2];
        params.d = std::min(params.d, gap);
    }
    params.degenerate = params.d <= 0.0;
    table.set_params(params);
    return table;
}

} // namespace brue
