#include "brue/gametree.hpp"

#include <sstream>

#include "brue/errors.hpp"
#include "brue/format.hpp"
#include "brue/rng.hpp"

namespace brue {

void GameTreeSpec::validate() const {
    if (branching < 2 || depth < 1) {
        throw ConfigError("gametree: need branching >= 2 and depth >= 1");
    }
    double leaves = 1.0;
    for (int i = 0; i < depth; ++i) {
        leaves *= branching;
    }
    if (leaves >= 0x1.0p56) {
        throw ConfigError("gametree: branching^depth must stay below 2^56");
    }
    if (!explicit_edges.empty()) {
        if (explicit_edges.size() != static_cast<std::size_t>(depth)) {
            throw ConfigError("gametree: explicit_edges must list one vector per level");
        }
        std::size_t width = 1;
        for (int level = 1; level <= depth; ++level) {
            width *= static_cast<std::size_t>(branching);
            const auto& values = explicit_edges[static_cast<std::size_t>(level - 1)];
            if (values.size() != width) {
                throw ConfigError("gametree: explicit_edges level has the wrong size");
            }
            const bool max_move = (level - 1) % 2 == 0;
            for (int v : values) {
                if (max_move ? (v < 0 || v > 127) : (v < -127 || v > 0)) {
                    throw ConfigError("gametree: explicit move value out of range");
                }
            }
        }
    }
}

std::string GameTreeSpec::to_text() const {
    std::ostringstream out;
    out << "domain=gametree\n"
        << "branching=" << branching << '\n'
        << "depth=" << depth << '\n'
        << "tree_seed=" << tree_seed << '\n';
    if (!explicit_edges.empty()) {
        out << "explicit_edges=";
        for (std::size_t l = 0; l < explicit_edges.size(); ++l) {
            out << (l ? ";" : "");
            for (std::size_t i = 0; i < explicit_edges[l].size(); ++i) {
                out << (i ? "," : "") << explicit_edges[l][i];
            }
        }
        out << '\n';
    }
    return out.str();
}

GameTreeMdp::GameTreeMdp(GameTreeSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

std::size_t GameTreeMdp::num_actions(StateId s) const {
    return depth_of(s) < spec_.depth ? static_cast<std::size_t>(spec_.branching) : 0;
}

StateId GameTreeMdp::child(StateId s, ActionId a) const {
    const int d = depth_of(s);
    if (d >= spec_.depth || a >= static_cast<ActionId>(spec_.branching)) {
        throw ContractViolation("gametree: inapplicable move");
    }
    return node(d + 1, position_of(s) * static_cast<std::uint64_t>(spec_.branching) + a);
}

int GameTreeMdp::edge_value(StateId s) const {
    const int d = depth_of(s);
    const std::uint64_t pos = position_of(s);
    if (!spec_.explicit_edges.empty()) {
        return spec_.explicit_edges[static_cast<std::size_t>(d - 1)][pos];
    }
    const auto magnitude = static_cast<int>(mix64(spec_.tree_seed ^ mix64(s.value)) & 127u);
    const bool max_move = (d - 1) % 2 == 0;
    return max_move ? magnitude : -magnitude;
}

int GameTreeMdp::payoff(StateId leaf) const {
    int total = 0;
    const auto b = static_cast<std::uint64_t>(spec_.branching);
    std::uint64_t pos = position_of(leaf);
    for (int d = depth_of(leaf); d > 0; --d) {
        total += edge_value(node(d, pos));
        pos /= b;
    }
    return total;
}

Transition GameTreeMdp::sample_transition(StateId s, ActionId a, RngStream&) const {
    const StateId next = child(s, a);
    const double reward = depth_of(next) == spec_.depth ? scaled(payoff(next)) : 0.0;
    return {next, reward};
}

std::vector<Outcome> GameTreeMdp::enumerate_outcomes(StateId s, ActionId a) const {
    const StateId next = child(s, a);
    const double reward = depth_of(next) == spec_.depth ? scaled(payoff(next)) : 0.0;
    return {Outcome{next, 1.0, reward}};
}

std::string GameTreeMdp::describe_state(StateId s) const {
    return "(depth=" + std::to_string(depth_of(s)) + ",pos=" + std::to_string(position_of(s)) + ")";
}

} // namespace brue
