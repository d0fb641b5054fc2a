#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "brue/errors.hpp"
#include "brue/gametree.hpp"
#include "brue/oracle.hpp"
#include "brue/planner.hpp"
#include "brue/regret.hpp"
#include "brue/sailing.hpp"
#include "brue/tabular.hpp"

using namespace brue;

namespace {

std::vector<ActionStats> make_stats(std::initializer_list<std::pair<std::uint64_t, double>> cells) {
    std::vector<ActionStats> out;
    for (const auto& [n, q] : cells) {
        ActionStats s;
        s.visits = n;
        s.value = q;
        out.push_back(s);
    }
    return out;
}

TabularMdp two_arm(double r0, double r1) {
    TabularModel m;
    m.transitions = {{{{StateId{1}, 1.0, r0}}, {{StateId{1}, 1.0, r1}}}, {}};
    return TabularMdp(m);
}

TabularMdp shifted(const TabularMdp& base, double shift) {
    TabularModel m = base.model();
    for (auto& actions : m.transitions) {
        for (auto& outcomes : actions) {
            for (Outcome& o : outcomes) {
                o.reward += shift;
            }
        }
    }
    return TabularMdp(m);
}

const std::vector<std::string> kAllPlanners = {
    "uct", "uct:c=0.5", "gct:0.5", "brue", "brue-alpha:0.9", "brue-per-alpha:0.9", "naive", "crafty",
};

} // namespace

TEST_CASE("uct_select") {
    RngStream rng(1, 1);
    SUBCASE("unexplored first") {
        const auto one = make_stats({{3, 0.9}, {0, 0.0}, {2, 0.5}});
        for (int i = 0; i < 20; ++i) {
            CHECK(uct_select(one, 1.0, false, rng) == 1);
        }
        const auto two = make_stats({{0, 0.0}, {5, 1.0}, {0, 0.0}});
        std::array<int, 3> counts{};
        for (int i = 0; i < 2000; ++i) {
            ++counts[uct_select(two, 1.0, false, rng)];
        }
        CHECK(counts[1] == 0);
        CHECK(std::abs(counts[0] - 1000) < 3 * 23);
    }
    SUBCASE("UCB1 scores") {
        const auto s = make_stats({{1, 0.6}, {1, 0.4}});
        CHECK(0.6 + std::sqrt(std::log(2.0)) == doctest::Approx(1.4326).epsilon(1e-4));
        CHECK(uct_select(s, 1.0, false, rng) == 0);
        CHECK(uct_select(s, 1.0, true, rng) == 1);
        // A large bonus on a rarely tried action overrides a better mean.
        const auto t = make_stats({{100, 0.6}, {1, 0.4}});
        CHECK(uct_select(t, 1.0, false, rng) == 1);
    }
    SUBCASE("ties are uniform") {
        const auto s = make_stats({{4, 0.3}, {4, 0.3}});
        int zeros = 0;
        for (int i = 0; i < 10000; ++i) {
            zeros += uct_select(s, 0.0, false, rng) == 0;
        }
        CHECK(std::abs(zeros - 5000) < 3 * 50);
    }
    SUBCASE("empirical-best coefficient") {
        CHECK(empirical_best_coefficient(make_stats({{0, 0}, {0, 0}}), false) == 1.0);
        CHECK(empirical_best_coefficient(make_stats({{1, 0.2}, {2, 0.7}, {0, 9.0}}), false) == 0.7);
        CHECK(empirical_best_coefficient(make_stats({{1, -3.0}, {2, -5.0}}), false) == 3.0);
        CHECK(empirical_best_coefficient(make_stats({{1, 0.2}, {2, 0.7}}), true) == 0.2);
    }
}

TEST_CASE("uct_update") {
    ActionStats s;
    uct_update(s, 0.7);
    CHECK(s.visits == 1);
    CHECK(s.value == 0.7);
    s.value = 0.5;
    uct_update(s, 0.9);
    CHECK(s.value == doctest::Approx(0.7));
    ActionStats r;
    for (double x : {1.0, 0.0, 1.0, 0.0}) {
        uct_update(r, x);
    }
    CHECK(r.value == 0.5);
}

TEST_CASE("brue_switch") {
    CHECK(brue_switch(1, 3) == 3);
    CHECK(brue_switch(2, 3) == 2);
    CHECK(brue_switch(3, 3) == 1);
    CHECK(brue_switch(4, 3) == 3);
    for (std::uint64_t n = 1; n < 10; ++n) {
        CHECK(brue_switch(n, 1) == 1);
    }
    CHECK(brue_switch(7, 7) == 1);
    CHECK_THROWS_AS(brue_switch(0, 3), ContractViolation);
}

TEST_CASE("brue_alpha_update") {
    ActionStats s;
    for (double x : {1.0, 0.0, 0.5, 0.9}) {
        brue_alpha_update(s, x, 0.5);
    }
    CHECK(s.visits == 4);
    CHECK(s.rewards.size() == 4);
    CHECK(s.value == doctest::Approx(0.7));

    ActionStats one;
    brue_alpha_update(one, 0.37, 0.1);
    CHECK(one.value == 0.37);

    ActionStats full;
    ActionStats mean;
    RngStream rng(5, 5);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform();
        brue_alpha_update(full, x, 1.0);
        uct_update(mean, x);
        REQUIRE(full.value == mean.value);
    }

    ActionStats w;
    RngStream rng2(6, 6);
    for (int n = 1; n <= 200; ++n) {
        brue_alpha_update(w, rng2.uniform(), 0.3);
        const auto window = static_cast<std::size_t>(std::ceil(0.3 * n));
        double sum = 0.0;
        for (std::size_t i = w.rewards.size() - window; i < w.rewards.size(); ++i) {
            sum += w.rewards[i];
        }
        REQUIRE(w.value == doctest::Approx(sum / window).epsilon(1e-12));
        REQUIRE(w.visits == w.rewards.size());
    }
}

TEST_CASE("recommendation rule") {
    RngStream rng(2, 2);
    const auto unique = make_stats({{3, 0.2}, {3, 0.8}, {3, 0.5}});
    for (int i = 0; i < 50; ++i) {
        CHECK(recommend_best(unique, false, rng) == ActionId{1});
    }
    const auto tied = make_stats({{3, 0.8}, {3, 0.8}, {3, 0.5}});
    int zeros = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto a = recommend_best(tied, false, rng);
        REQUIRE(a.has_value());
        REQUIRE(*a != 2);
        zeros += *a == 0;
    }
    CHECK(std::abs(zeros - 5000) < 3 * 50);
    const auto lone = make_stats({{0, 0.0}, {0, 0.0}, {1, -4.0}});
    CHECK(recommend_best(lone, false, rng) == ActionId{2});
    CHECK_FALSE(recommend_best(make_stats({{0, 0.0}, {0, 0.0}}), false, rng).has_value());

    // Estimation phase: all-unvisited nodes fall back to uniform.
    std::array<int, 3> counts{};
    for (int i = 0; i < 3000; ++i) {
        ++counts[greedy_select(make_stats({{0, 0}, {0, 0}, {0, 0}}), false, rng)];
    }
    for (int c : counts) {
        CHECK(std::abs(c - 1000) < 4 * 26);
    }
    CHECK(greedy_select(make_stats({{2, 0.3}, {2, 0.1}, {0, 0}}), true, rng) == 1);
}

TEST_CASE("epsilon-greedy root") {
    RngStream rng(3, 3);
    const auto s = make_stats({{5, 0.9}, {5, 0.1}});
    int zeros = 0;
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        zeros += epsilon_greedy_select(s, 0.5, false, rng) == 0;
    }
    CHECK(std::abs(zeros / double(n) - 0.75) < 3 * std::sqrt(0.75 * 0.25 / n));
    zeros = 0;
    for (int i = 0; i < n; ++i) {
        zeros += epsilon_greedy_select(s, 1.0, false, rng) == 0;
    }
    CHECK(std::abs(zeros / double(n) - 0.5) < 3 * std::sqrt(0.25 / n));
    for (int i = 0; i < 100; ++i) {
        CHECK(epsilon_greedy_select(s, 0.0, false, rng) == 0);
    }
}

TEST_CASE("permissive update rule") {
    CHECK(permissive_update_applies(make_stats({{1, 0.1}, {0, 0.0}}), 0, false));
    CHECK(permissive_update_applies(make_stats({{1, 0.1}, {2, 0.5}}), 1, false));
    CHECK_FALSE(permissive_update_applies(make_stats({{1, 0.1}, {2, 0.5}}), 0, false));
    CHECK(permissive_update_applies(make_stats({{1, 0.1}, {2, 0.5}}), 0, true));

    // sigma = 1 at H = 1: permissive and strict coincide.
    const TabularMdp bandit = bernoulli_bandit_mdp({0.3, 0.6, 0.5});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RngStream rng(seed, 0);
        CHECK(mcts_plan(bandit, StateId{0}, 50, parse_planner("brue-per-alpha:1"), rng) ==
              mcts_plan(bandit, StateId{0}, 50, parse_planner("brue"), rng));
    }

    // On a deterministic chain every ancestor has a single, best action, so
    // all sigma cells are updated.
    TabularModel chain;
    for (int i = 0; i < 4; ++i) {
        chain.transitions.push_back({{{StateId{static_cast<std::uint64_t>(i + 1)}, 1.0, 0.25}}});
    }
    chain.transitions.push_back({});
    chain.horizon = 4;
    const TabularMdp m(chain);
    auto per = make_planner(m, StateId{0}, parse_planner("brue-per-alpha:0.9"), RngStream(1, 1));
    auto strict = make_planner(m, StateId{0}, parse_planner("brue-alpha:0.9"), RngStream(1, 1));
    for (int i = 0; i < 12; ++i) {
        per->run_iteration();
        strict->run_iteration();
        const int sigma = *per->last_trajectory().switch_index;
        // Before the cell below has been visited once the first update there counts too.
        CHECK(per->last_update_count() == static_cast<std::size_t>(sigma));
        CHECK(strict->last_update_count() == 1);
    }
}

TEST_CASE("permissive update skips non-greedy ancestors") {
    // Root: action 0 leads to a state with one action paying 1, action 1 to a
    // state paying 0. After both root actions are sampled, a sample through
    // action 1 must not update the root cell when sigma = 2.
    TabularModel model;
    model.transitions = {
        {{{StateId{1}, 1.0, 0.0}}, {{StateId{2}, 1.0, 0.0}}},
        {{{StateId{3}, 1.0, 1.0}}},
        {{{StateId{3}, 1.0, 0.0}}},
        {},
    };
    model.horizon = 2;
    const TabularMdp m(model);
    BruePlanner p(m, StateId{0}, 2, parse_planner("brue-per-alpha:1"), RngStream(4, 4));
    std::vector<std::pair<SearchTree::NodeIndex, ActionId>> updates;
    p.set_observer([&](SearchTree::NodeIndex node, ActionId a, double) { updates.emplace_back(node, a); });
    bool saw_skip = false;
    for (int i = 0; i < 200; ++i) {
        updates.clear();
        const auto root_before = std::vector<ActionStats>(p.tree()->stats(0).begin(), p.tree()->stats(0).end());
        p.run_iteration();
        const Trajectory& t = p.last_trajectory();
        if (*t.switch_index != 2) {
            continue;
        }
        const bool fully = root_before[0].visits > 0 && root_before[1].visits > 0;
        const bool best = root_before[t.actions[0]].value >= root_before[1 - t.actions[0]].value;
        const bool root_updated = std::any_of(updates.begin(), updates.end(),
                                              [](const auto& u) { return u.first == 0; });
        CHECK(root_updated == (!fully || best));
        saw_skip = saw_skip || !root_updated;
    }
    CHECK(saw_skip);
}

TEST_CASE("mcts_plan basics") {
    const TabularMdp m = two_arm(1.0, 0.0);
    SUBCASE("single iteration") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto uct = make_planner(m, StateId{0}, parse_planner("uct"), RngStream(seed, 0));
            uct->run_iteration();
            const ActionId sampled = uct->last_trajectory().actions[0];
            CHECK(uct->recommend() == sampled);
        }
    }
    SUBCASE("every planner finds the better deterministic arm") {
        for (const std::string& name : kAllPlanners) {
            CAPTURE(name);
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                REQUIRE(mcts_plan(m, StateId{0}, 64, parse_planner(name), RngStream(seed, 9)) == 0);
            }
        }
    }
    SUBCASE("contract") {
        CHECK_THROWS_AS(mcts_plan(m, StateId{0}, 0, parse_planner("brue"), RngStream(1, 1)),
                        ContractViolation);
        const TabularMdp deep = random_tabular_mdp(RandomMdpSpec{2, 2, 3}, 4);
        auto brue = make_planner(deep, deep.start(), parse_planner("brue"), RngStream(1, 1));
        brue->run_iteration(); // sigma = 3 updates a depth-2 cell only
        CHECK_THROWS_AS(brue->recommend(), InsufficientBudget);
    }
}

TEST_CASE("BRUE on 3x3 sailing") {
    SailingConfig c;
    c.grid_size = 3;
    const SailingMdp m(c);
    const StateId root = m.encode({0, 0, 2, Tack::none});
    const std::vector<StateId> starts = {root};
    const OracleTable o = build_oracle(m, m.horizon(), starts);
    for (std::uint64_t seed : {1, 2, 3}) {
        const ActionId a = mcts_plan(m, root, 4096, parse_planner("brue"), RngStream(seed, 99));
        CHECK(a == 1);
        CHECK(simple_regret(o, root, m.horizon(), a) == 0.0);
    }
}

TEST_CASE("planner trajectories satisfy the invariants") {
    const SailingMdp sailing(SailingConfig{});
    GameTreeSpec gs;
    gs.branching = 3;
    gs.depth = 4;
    gs.tree_seed = 5;
    const GameTreeMdp tree(gs);
    const TabularMdp tabular = random_tabular_mdp(RandomMdpSpec{2, 2, 3, 0.3, 0.2}, 8);
    const std::vector<std::pair<const GenerativeMdp*, StateId>> cases = {
        {&sailing, sailing.encode({0, 0, 3, Tack::none})},
        {&tree, tree.root()},
        {&tabular, tabular.start()},
    };
    for (const auto& [mdp, root] : cases) {
        for (const std::string& name : kAllPlanners) {
            if ((name == "naive" || name == "crafty") && mdp != &tabular) {
                continue;
            }
            CAPTURE(name);
            auto p = make_planner(*mdp, root, parse_planner(name), RngStream(3, 3));
            for (int i = 0; i < 300; ++i) {
                p->run_iteration();
                REQUIRE(satisfies_trajectory_invariants(p->last_trajectory(), *mdp, mdp->horizon()));
            }
        }
    }
}

TEST_CASE("strict BRUE updates one cell per iteration, round-robin over levels") {
    const TabularMdp m = random_tabular_mdp(RandomMdpSpec{3, 2, 4}, 12);
    for (const std::string& name : {"brue", "brue-alpha:0.7"}) {
        auto p = make_planner(m, m.start(), parse_planner(name), RngStream(8, 8));
        std::map<int, int> levels;
        std::map<std::pair<SearchTree::NodeIndex, ActionId>, int> touched;
        p->set_observer([&](SearchTree::NodeIndex n, ActionId a, double) { ++touched[{n, a}]; });
        constexpr int rounds = 250;
        for (int i = 0; i < rounds * 4; ++i) {
            touched.clear();
            p->run_iteration();
            REQUIRE(p->last_update_count() == 1);
            REQUIRE(touched.size() == 1);
            const int sigma = *p->last_trajectory().switch_index;
            ++levels[sigma];
            REQUIRE(p->tree()->node(touched.begin()->first.first).depth == sigma - 1);
        }
        for (int s = 1; s <= 4; ++s) {
            CHECK(levels[s] == rounds);
        }
    }
}

TEST_CASE("BRUE(1) reproduces BRUE") {
    const SailingMdp m(SailingConfig{});
    const auto starts = m.non_goal_states();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const StateId root = starts[seed * 13 % starts.size()];
        auto a = make_planner(m, root, parse_planner("brue"), RngStream(seed, 1));
        auto b = make_planner(m, root, parse_planner("brue-alpha:1"), RngStream(seed, 1));
        for (int i = 0; i < 400; ++i) {
            a->run_iteration();
            b->run_iteration();
            REQUIRE(a->last_trajectory() == b->last_trajectory());
        }
        RngStream ra(seed, 2);
        RngStream rb(seed, 2);
        CHECK(a->recommend(ra) == b->recommend(rb));
    }
}

TEST_CASE("UCT values are the mean of credited returns") {
    const SailingMdp m(SailingConfig{});
    for (const std::string& name : {"uct", "gct:0.5", "uct:c=2,keying=tree"}) {
        auto p = make_planner(m, m.encode({1, 0, 6, Tack::none}), parse_planner(name), RngStream(4, 4));
        std::map<std::pair<SearchTree::NodeIndex, ActionId>, std::pair<double, int>> shadow;
        p->set_observer([&](SearchTree::NodeIndex n, ActionId a, double r) {
            auto& [sum, count] = shadow[{n, a}];
            sum += r;
            ++count;
        });
        for (int i = 0; i < 2000; ++i) {
            p->run_iteration();
        }
        const SearchTree& t = *p->tree();
        for (const auto& [cell, acc] : shadow) {
            const ActionStats& st = t.stats(cell.first)[cell.second];
            REQUIRE(st.visits == static_cast<std::uint64_t>(acc.second));
            REQUIRE(std::abs(st.value - acc.first / acc.second) <= 1e-12 * (1 + std::abs(st.value)));
        }
    }
}

TEST_CASE("UCT explores every action before applying UCB1") {
    const SailingMdp m(SailingConfig{});
    auto p = make_planner(m, m.encode({0, 2, 1, Tack::none}), parse_planner("uct"), RngStream(6, 6));
    for (int i = 0; i < 3000; ++i) {
        p->run_iteration();
        if (i % 100 != 0) {
            continue;
        }
        const SearchTree& t = *p->tree();
        for (SearchTree::NodeIndex n = 0; n < t.size(); ++n) {
            const auto stats = t.stats(n);
            const bool has_unvisited = std::any_of(stats.begin(), stats.end(),
                                                   [](const ActionStats& s) { return s.visits == 0; });
            if (has_unvisited) {
                for (const ActionStats& s : stats) {
                    REQUIRE(s.visits <= 1);
                }
            }
        }
    }
}

TEST_CASE("DAG keying stores one node per (state, depth)") {
    const SailingMdp m(SailingConfig{});
    for (const std::string& name : {"uct", "brue"}) {
        auto p = make_planner(m, m.encode({0, 0, 0, Tack::none}), parse_planner(name), RngStream(7, 7));
        for (int i = 0; i < 3000; ++i) {
            p->run_iteration();
        }
        const SearchTree& t = *p->tree();
        CHECK(t.keying() == Keying::dag);
        std::set<std::pair<std::uint64_t, int>> seen;
        for (SearchTree::NodeIndex n = 0; n < t.size(); ++n) {
            REQUIRE(seen.insert({t.node(n).state.value, t.node(n).depth}).second);
        }
        CHECK(t.size() > 50);
    }
    GameTreeSpec gs;
    gs.depth = 4;
    const GameTreeMdp g(gs);
    auto p = make_planner(g, g.root(), parse_planner("brue"), RngStream(1, 1));
    CHECK(p->tree()->keying() == Keying::tree);
}

TEST_CASE("recommendations are invariant to a constant reward shift") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const TabularMdp base = random_tabular_mdp(RandomMdpSpec{3, 2, 3}, seed);
        const TabularMdp moved = shifted(base, 0.5);
        for (const std::string& name : {"brue", "brue-alpha:0.8"}) {
            const PlannerConfig c = parse_planner(name);
            CHECK(mcts_plan(base, base.start(), 300, c, RngStream(seed, 3)) ==
                  mcts_plan(moved, moved.start(), 300, c, RngStream(seed, 3)));
        }
    }
}

TEST_CASE("MIN nodes minimize") {
    // Maximizing at the MIN level would prefer move 1 (leaf 100).
    GameTreeSpec spec;
    spec.branching = 2;
    spec.depth = 2;
    spec.explicit_edges = {{0, 100}, {0, 0, -127, 0}};
    const GameTreeMdp g(spec);
    for (const std::string& name : {"uct", "uct:c=0.5", "gct:0.5", "brue", "brue-alpha:0.9"}) {
        CAPTURE(name);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            CHECK(mcts_plan(g, g.root(), 400, parse_planner(name), RngStream(seed, 1)) == 0);
        }
    }
    // Flat policies fix the opponent's replies, so the bandit reduction does not apply.
    CHECK_THROWS_AS(make_planner(g, g.root(), parse_planner("naive"), RngStream(1, 1)), CapabilityError);
    CHECK_THROWS_AS(make_planner(g, g.root(), parse_planner("crafty"), RngStream(1, 1)), CapabilityError);
}

TEST_CASE("flat-policy planners") {
    SUBCASE("one sweep of a deterministic MDP is exact") {
        TabularModel model;
        model.transitions = {
            {{{StateId{1}, 1.0, 0.2}}, {{StateId{2}, 1.0, 0.5}}},
            {{{StateId{3}, 1.0, 1.0}}, {{StateId{3}, 1.0, 0.1}}},
            {{{StateId{3}, 1.0, 0.2}}, {{StateId{3}, 1.0, 0.3}}},
            {},
        };
        model.horizon = 2;
        const TabularMdp m(model);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto p = make_planner(m, StateId{0}, parse_planner("naive"), RngStream(seed, 1));
            auto& flat = dynamic_cast<FlatUniformPlanner&>(*p);
            CHECK(flat.policy_count() == 4);
            for (std::size_t i = 0; i < flat.policy_count(); ++i) {
                p->run_iteration();
            }
            CHECK(p->recommend() == 0);
        }
    }
    SUBCASE("policy count and cap") {
        const TabularMdp m = random_tabular_mdp(RandomMdpSpec{2, 2, 2}, 1);
        auto p = make_planner(m, m.start(), parse_planner("naive"), RngStream(1, 1));
        CHECK(dynamic_cast<FlatUniformPlanner&>(*p).policy_count() == 8);
        CHECK_THROWS_AS(make_planner(m, m.start(), parse_planner("crafty:cap=4"), RngStream(1, 1)),
                        ResourceError);
    }
    SUBCASE("naive sweeps round-robin") {
        const TabularMdp m = random_tabular_mdp(RandomMdpSpec{2, 2, 2}, 2);
        FlatUniformPlanner p(m, m.start(), 2, parse_planner("naive"), RngStream(2, 2));
        std::vector<std::size_t> order;
        p.set_observer([&](SearchTree::NodeIndex, ActionId i, double) { order.push_back(i); });
        for (int i = 0; i < 24; ++i) {
            p.run_iteration();
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            CHECK(order[i] == i % 8);
        }
    }
    SUBCASE("crafty credits exactly the consistent policies") {
        const TabularMdp m = random_tabular_mdp(RandomMdpSpec{2, 2, 3, 0.4, 0.2}, 3);
        FlatUniformPlanner p(m, m.start(), 3, parse_planner("crafty"), RngStream(3, 3));
        std::set<std::size_t> credited;
        p.set_observer([&](SearchTree::NodeIndex, ActionId i, double) { credited.insert(i); });
        for (int it = 0; it < 200; ++it) {
            credited.clear();
            p.run_iteration();
            const Trajectory& t = p.last_trajectory();
            for (std::size_t i = 0; i < p.policy_count(); ++i) {
                bool consistent = true;
                for (std::size_t d = 0; d < t.length(); ++d) {
                    const auto a = p.policy(i).action_at({static_cast<int>(d), t.states[d]});
                    consistent = consistent && a && *a == t.actions[d];
                }
                REQUIRE(credited.contains(i) == consistent);
            }
            REQUIRE_FALSE(credited.empty());
        }
    }
    SUBCASE("crafty at H = 1 credits the policy of the sampled root action") {
        const TabularMdp m = bernoulli_bandit_mdp({0.2, 0.5, 0.7});
        FlatUniformPlanner p(m, StateId{0}, 1, parse_planner("crafty"), RngStream(4, 4));
        for (int it = 0; it < 100; ++it) {
            p.run_iteration();
            REQUIRE(p.last_update_count() == 1);
        }
    }
}

TEST_CASE("planner strings") {
    const PlannerConfig a = parse_planner("brue-alpha:0.9");
    CHECK(a.algorithm == Algorithm::brue_alpha);
    CHECK(a.alpha == 0.9);
    const PlannerConfig u = parse_planner("uct:c=auto");
    CHECK(u.exploration == ExplorationMode::empirical_best);
    const PlannerConfig f = parse_planner("uct:c=1.5,recommend=visits,keying=tree");
    CHECK(f.exploration == ExplorationMode::fixed);
    CHECK(f.exploration_c == 1.5);
    CHECK(f.uct_recommendation == Recommendation::max_visits);
    CHECK(f.keying == Keying::tree);
    CHECK(parse_planner("gct:0.25").epsilon == 0.25);
    CHECK(parse_planner("brue-per:0.8").update == UpdateMode::permissive);

    for (const std::string& s : {"uct", "gct:eps=0.5,c=auto", "brue", "brue-alpha:alpha=0.9",
                                 "brue-per-alpha:alpha=0.5", "naive", "crafty:cap=99",
                                 "uct:c=2,recommend=visits,keying=dag"}) {
        const PlannerConfig c = parse_planner(s);
        CHECK(to_string(parse_planner(to_string(c))) == to_string(c));
    }
    const auto list = parse_planner_list("uct,gct:eps=0.5,c=auto;brue, brue-alpha:0.9");
    REQUIRE(list.size() == 4);
    CHECK(list[1].algorithm == Algorithm::gct);
    CHECK(to_string(list) == "uct:c=auto;gct:eps=0.5,c=auto;brue;brue-alpha:alpha=0.9");

    CHECK_THROWS_AS(parse_planner("bogus"), ConfigError);
    CHECK_THROWS_AS(parse_planner("brue-alpha:0"), ConfigError);
    CHECK_THROWS_AS(parse_planner("brue-alpha:1.5"), ConfigError);
    CHECK_THROWS_AS(parse_planner("gct:eps=2"), ConfigError);
    CHECK_THROWS_AS(parse_planner("uct:foo=1"), ConfigError);
    CHECK_THROWS_AS(parse_planner("naive:3"), ConfigError);
    CHECK_THROWS_AS(parse_planner_list(""), ConfigError);
}

TEST_CASE("terminal-bound samples") {
    const PlannerConfig c = parse_planner("brue:rollout=terminal");
    CHECK(c.rollout_end == RolloutEnd::terminal);
    CHECK(to_string(c) == "brue:rollout=terminal");
    CHECK(parse_planner("uct").rollout_end == RolloutEnd::horizon);
    CHECK_THROWS_AS(parse_planner("uct:rollout=forever"), ConfigError);

    SailingConfig sc;
    sc.grid_size = 4;
    const SailingMdp mdp(sc);
    const StateId s0 = mdp.non_goal_states().front();
    for (const char* text : {"brue:rollout=terminal", "uct:rollout=terminal"}) {
        auto p = make_planner(mdp, s0, parse_planner(text), RngStream(3, 0));
        std::size_t longest = 0;
        for (int i = 0; i < 400; ++i) {
            p->run_iteration();
            const Trajectory& t = p->last_trajectory();
            longest = std::max(longest, t.length());
            CHECK(t.length() <= static_cast<std::size_t>(kTerminalRolloutFactor * mdp.horizon()));
            if (t.length() < static_cast<std::size_t>(kTerminalRolloutFactor * mdp.horizon())) {
                CHECK(mdp.is_terminal(t.states.back()));
            }
        }
        CHECK(longest > static_cast<std::size_t>(mdp.horizon()));
    }
}
