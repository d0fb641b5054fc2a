#include <doctest.h>

#include <cmath>
#include <map>

#include "brue/errors.hpp"
#include "brue/gametree.hpp"
#include "brue/sailing.hpp"

using namespace brue;

namespace {

int relative(int heading, int wind) { return (heading - wind + 8) % 8; }

ActionId action_with_heading(const SailingMdp& m, StateId s, int heading) {
    for (ActionId a = 0; a < m.num_actions(s); ++a) {
        if (m.heading(s, a) == heading) {
            return a;
        }
    }
    FAIL("heading not applicable");
    return 0;
}

} // namespace

TEST_CASE("sailing goal is absorbing") {
    const SailingMdp m(SailingConfig{});
    CHECK(m.is_terminal(m.goal_state()));
    CHECK(m.num_actions(m.goal_state()) == 0);
    CHECK(m.applicable_actions(m.goal_state()).empty());
    for (StateId s : m.non_goal_states()) {
        REQUIRE_FALSE(m.is_terminal(s));
    }
}

TEST_CASE("sailing move costs") {
    const SailingMdp m(SailingConfig{});
    RngStream rng(3, 3);

    SUBCASE("straight downwind on the same tack costs the tail-wind entry") {
        const StateId s = m.encode({1, 1, 2, Tack::none});
        const ActionId a = action_with_heading(m, s, 2);
        CHECK(m.sample_transition(s, a, rng).reward == -1.0);
        for (const Outcome& o : m.enumerate_outcomes(s, a)) {
            CHECK(o.reward == -1.0);
        }
    }
    SUBCASE("diagonal moves cost sqrt(2) more") {
        const StateId s = m.encode({1, 1, 0, Tack::none});
        const ActionId a = action_with_heading(m, s, 1); // 45 degrees off a northward wind
        CHECK(m.sample_transition(s, a, rng).reward == doctest::Approx(-2.0 * std::sqrt(2.0)));
    }
    SUBCASE("changing tack adds the penalty") {
        const SailingState from{1, 1, 0, Tack::port};
        const int opposite = SailingMdp::tack_for(6, 0) == Tack::port ? 2 : 6;
        CHECK(SailingMdp::tack_for(opposite, 0) == Tack::starboard);
        CHECK(m.move_cost(from, opposite) == doctest::Approx(3.0 + 3.0));
        CHECK(m.move_cost(SailingState{1, 1, 0, Tack::starboard}, opposite) == doctest::Approx(3.0));
    }
    SUBCASE("sailing into the wind is never applicable") {
        for (StateId s : m.non_goal_states()) {
            const SailingState st = m.decode(s);
            for (ActionId a = 0; a < m.num_actions(s); ++a) {
                const int h = m.heading(s, a);
                REQUIRE(relative(h, st.wind) != 4);
                const int nx = st.x + kDirDx[h];
                const int ny = st.y + kDirDy[h];
                REQUIRE(nx >= 0);
                REQUIRE(ny >= 0);
                REQUIRE(nx < 5);
                REQUIRE(ny < 5);
            }
        }
    }
}

TEST_CASE("sailing configuration and encoding") {
    SailingConfig c;
    CHECK(SailingMdp(c).horizon() == 20);
    c.wind_persist_prob = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SailingConfig{};
    c.grid_size = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SailingConfig{};
    c.goal_x = 7;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SailingConfig{};
    c.move_cost[3] = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    const SailingMdp m(SailingConfig{});
    for (StateId s : m.non_goal_states()) {
        REQUIRE(m.encode(m.decode(s)) == s);
    }
    CHECK(m.non_goal_states().size() == (25 - 1) * 8 * 3);
}

TEST_CASE("sailing wind chain frequencies") {
    const SailingMdp m(SailingConfig{});
    const StateId s = m.encode({1, 1, 3, Tack::none});
    const ActionId a = action_with_heading(m, s, 3);
    RngStream rng(11, 1);
    constexpr int n = 1000000;
    std::map<int, int> counts;
    for (int i = 0; i < n; ++i) {
        ++counts[m.decode(m.sample_transition(s, a, rng).next).wind];
    }
    const std::map<int, double> expected = {{3, 0.4}, {4, 0.3}, {2, 0.3}};
    CHECK(counts.size() == 3);
    for (const auto& [wind, p] : expected) {
        const double freq = static_cast<double>(counts[wind]) / n;
        CHECK(std::abs(freq - p) < 3 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("sailing sampling agrees with enumeration") {
    const SailingMdp m(SailingConfig{});
    RngStream rng(12, 1);
    constexpr int n = 100000;
    int checked = 0;
    for (const SailingState st : {SailingState{0, 0, 0, Tack::none}, SailingState{2, 3, 5, Tack::port},
                                  SailingState{3, 4, 1, Tack::starboard}}) {
        const StateId s = m.encode(st);
        for (ActionId a = 0; a < m.num_actions(s); ++a) {
            const auto outcomes = m.enumerate_outcomes(s, a);
            double total = 0.0;
            std::map<std::uint64_t, int> counts;
            for (const Outcome& o : outcomes) {
                REQUIRE(o.probability > 0.0);
                total += o.probability;
            }
            REQUIRE(std::abs(total - 1.0) <= 1e-12);
            for (int i = 0; i < n; ++i) {
                const Transition t = m.sample_transition(s, a, rng);
                ++counts[t.next.value];
                REQUIRE(t.reward == outcomes.front().reward);
            }
            double chi2 = 0.0;
            for (const Outcome& o : outcomes) {
                const double e = o.probability * n;
                const double d = counts[o.next.value] - e;
                chi2 += d * d / e;
            }
            REQUIRE(counts.size() == outcomes.size());
            // 99.99% quantile of chi-square with at most 2 degrees of freedom.
            CHECK(chi2 < 18.5);
            ++checked;
        }
    }
    CHECK(checked > 5);
}

TEST_CASE("hand-built game tree") {
    GameTreeSpec spec;
    spec.branching = 2;
    spec.depth = 2;
    spec.explicit_edges = {{100, 0}, {-50, -10, 0, -127}};
    const GameTreeMdp t(spec);
    const StateId root = t.root();
    std::vector<int> payoffs;
    for (ActionId a = 0; a < 2; ++a) {
        for (ActionId b = 0; b < 2; ++b) {
            payoffs.push_back(t.payoff(t.child(t.child(root, a), b)));
        }
    }
    CHECK(payoffs == std::vector<int>{50, 90, 0, -127});
    CHECK_FALSE(t.minimizes(root));
    CHECK(t.minimizes(t.child(root, 0)));

    RngStream rng(1, 1);
    const Transition step = t.sample_transition(root, 0, rng);
    CHECK(step.reward == 0.0);
    const Transition leaf = t.sample_transition(step.next, 1, rng);
    CHECK(leaf.reward == doctest::Approx(t.scaled(90)));
    CHECK(t.is_terminal(leaf.next));
    CHECK(t.scaled(spec.min_payoff()) == 0.0);
    CHECK(t.scaled(spec.max_payoff()) == 1.0);
}

TEST_CASE("random game trees") {
    GameTreeSpec spec;
    spec.branching = 3;
    spec.depth = 5;
    spec.tree_seed = 99;
    const GameTreeMdp a(spec);
    const GameTreeMdp b(spec);
    spec.tree_seed = 100;
    const GameTreeMdp c(spec);

    int differing = 0;
    std::vector<StateId> frontier = {a.root()};
    for (int depth = 0; depth < 5; ++depth) {
        std::vector<StateId> next;
        for (StateId s : frontier) {
            for (ActionId m = 0; m < 3; ++m) {
                const StateId child = a.child(s, m);
                const int v = a.edge_value(child);
                REQUIRE(v == b.edge_value(child));
                differing += v != c.edge_value(child);
                if (depth % 2 == 0) {
                    REQUIRE(v >= 0);
                    REQUIRE(v <= 127);
                } else {
                    REQUIRE(v <= 0);
                    REQUIRE(v >= -127);
                }
                next.push_back(child);
            }
        }
        frontier = std::move(next);
    }
    CHECK(differing > 300);
    for (StateId leaf : frontier) {
        REQUIRE(a.payoff(leaf) >= -127 * 3);
        REQUIRE(a.payoff(leaf) <= 127 * 3);
        REQUIRE(a.is_terminal(leaf));
    }

    GameTreeSpec bad;
    bad.branching = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.branching = 2;
    bad.depth = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
