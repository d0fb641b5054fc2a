#include "brue/planner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "brue/errors.hpp"
#include "brue/format.hpp"

namespace brue {

void PlannerConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ConfigError("alpha must lie in (0, 1], got " + format_real(alpha));
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ConfigError("epsilon must lie in [0, 1], got " + format_real(epsilon));
    }
    if (exploration == ExplorationMode::fixed && !(exploration_c >= 0.0 && std::isfinite(exploration_c))) {
        throw ConfigError("exploration constant must be finite and nonnegative");
    }
    if (update == UpdateMode::permissive && algorithm != Algorithm::brue_per_alpha) {
        throw ConfigError("permissive updates apply to brue-per-alpha only");
    }
    if (algorithm == Algorithm::brue_per_alpha && update != UpdateMode::permissive) {
        throw ConfigError("brue-per-alpha requires permissive updates");
    }
    if (algorithm == Algorithm::brue && alpha != 1.0) {
        throw ConfigError("plain brue uses alpha = 1; use brue-alpha");
    }
    if (policy_cap == 0) {
        throw ConfigError("policy cap must be positive");
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

void apply_argument(PlannerConfig& c, std::string_view key, std::string_view value, std::string_view text) {
    if (key == "c") {
        if (value == "auto") {
            c.exploration = ExplorationMode::empirical_best;
        } else {
            c.exploration = ExplorationMode::fixed;
            c.exploration_c = parse_real(value, "exploration constant");
        }
    } else if (key == "eps" || key == "epsilon") {
        c.epsilon = parse_real(value, "epsilon");
    } else if (key == "alpha") {
        c.alpha = parse_real(value, "alpha");
    } else if (key == "keying") {
        if (value == "dag") {
            c.keying = Keying::dag;
        } else if (value == "tree") {
            c.keying = Keying::tree;
        } else if (value == "auto") {
            c.keying = Keying::automatic;
        } else {
            throw ConfigError("unknown keying '" + std::string(value) + "'");
        }
    } else if (key == "recommend") {
        if (value == "value") {
            c.uct_recommendation = Recommendation::max_value;
        } else if (value == "visits") {
            c.uct_recommendation = Recommendation::max_visits;
        } else {
            throw ConfigError("unknown recommendation rule '" + std::string(value) + "'");
        }
    } else if (key == "rollout") {
        if (value == "horizon") {
            c.rollout_end = RolloutEnd::horizon;
        } else if (value == "terminal") {
            c.rollout_end = RolloutEnd::terminal;
        } else {
            throw ConfigError("unknown rollout end '" + std::string(value) + "'");
        }
    } else if (key == "cap") {
        c.policy_cap = parse_uint(value, "policy cap");
    } else {
        throw ConfigError("unknown planner argument '" + std::string(key) + "' in '" +
                          std::string(text) + "'");
    }
}

} // namespace

PlannerConfig parse_planner(std::string_view text) {
    const std::string_view body = trim(text);
    const auto colon = body.find(':');
    const std::string_view name = trim(body.substr(0, colon));
    PlannerConfig c;
    if (name == "uct") {
        c.algorithm = Algorithm::uct;
    } else if (name == "gct") {
        c.algorithm = Algorithm::gct;
    } else if (name == "brue") {
        c.algorithm = Algorithm::brue;
    } else if (name == "brue-alpha") {
        c.algorithm = Algorithm::brue_alpha;
    } else if (name == "brue-per-alpha" || name == "brue-per") {
        c.algorithm = Algorithm::brue_per_alpha;
        c.update = UpdateMode::permissive;
    } else if (name == "naive") {
        c.algorithm = Algorithm::naive_uniform;
    } else if (name == "crafty") {
        c.algorithm = Algorithm::crafty_uniform;
    } else {
        throw ConfigError("unknown planner '" + std::string(name) + "'");
    }
    if (colon != std::string_view::npos) {
        for (const std::string& arg : split_list(body.substr(colon + 1))) {
            const auto eq = arg.find('=');
            if (eq != std::string::npos) {
                apply_argument(c, trim(std::string_view(arg).substr(0, eq)),
                               trim(std::string_view(arg).substr(eq + 1)), text);
            } else if (c.algorithm == Algorithm::gct) {
                c.epsilon = parse_real(arg, "epsilon");
            } else if (c.algorithm == Algorithm::brue_alpha || c.algorithm == Algorithm::brue_per_alpha) {
                c.alpha = parse_real(arg, "alpha");
            } else if (c.algorithm == Algorithm::uct) {
                apply_argument(c, "c", arg, text);
            } else {
                throw ConfigError("planner '" + std::string(name) + "' takes no positional argument");
            }
        }
    }
    c.validate();
    return c;
}

std::string to_string(const PlannerConfig& c) {
    std::string name;
    std::vector<std::string> args;
    const bool uct_family = c.algorithm == Algorithm::uct || c.algorithm == Algorithm::gct;
    switch (c.algorithm) {
    case Algorithm::uct: name = "uct"; break;
    case Algorithm::gct:
        name = "gct";
        args.push_back("eps=" + format_short(c.epsilon));
        break;
    case Algorithm::brue: name = "brue"; break;
    case Algorithm::brue_alpha:
        name = "brue-alpha";
        args.push_back("alpha=" + format_short(c.alpha));
        break;
    case Algorithm::brue_per_alpha:
        name = "brue-per-alpha";
        args.push_back("alpha=" + format_short(c.alpha));
        break;
    case Algorithm::naive_uniform: name = "naive"; break;
    case Algorithm::crafty_uniform: name = "crafty"; break;
    }
    if (uct_family) {
        args.push_back(c.exploration == ExplorationMode::empirical_best
                           ? std::string("c=auto")
                           : "c=" + format_short(c.exploration_c));
        if (c.uct_recommendation == Recommendation::max_visits) {
            args.emplace_back("recommend=visits");
        }
    }
    if (c.keying == Keying::dag) {
        args.emplace_back("keying=dag");
    } else if (c.keying == Keying::tree) {
        args.emplace_back("keying=tree");
    }
    if (c.rollout_end == RolloutEnd::terminal) {
        args.emplace_back("rollout=terminal");
    }
    if ((c.algorithm == Algorithm::naive_uniform || c.algorithm == Algorithm::crafty_uniform) &&
        c.policy_cap != PlannerConfig{}.policy_cap) {
        args.push_back("cap=" + std::to_string(c.policy_cap));
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        name += (i == 0 ? ":" : ",") + args[i];
    }
    return name;
}

namespace {

bool starts_with_planner_name(std::string_view piece) {
    const std::string_view name = trim(piece.substr(0, piece.find(':')));
    return name == "uct" || name == "gct" || name == "brue" || name == "brue-alpha" ||
           name == "brue-per-alpha" || name == "brue-per" || name == "naive" || name == "crafty";
}

} // namespace

std::vector<PlannerConfig> parse_planner_list(std::string_view text) {
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), ';', ',');
    std::vector<std::string> items;
    for (const std::string& piece : split_list(normalized)) {
        if (piece.empty()) {
            continue;
        }
        if (items.empty() || starts_with_planner_name(piece)) {
            items.push_back(piece);
        } else {
            items.back() += "," + piece;
        }
    }
    if (items.empty()) {
        throw ConfigError("empty algorithm list");
    }
    std::vector<PlannerConfig> out;
    for (const std::string& item : items) {
        out.push_back(parse_planner(item));
    }
    return out;
}

std::string to_string(const std::vector<PlannerConfig>& configs) {
    std::string out;
    for (const PlannerConfig& c : configs) {
        if (!out.empty()) {
            out += ';';
        }
        out += to_string(c);
    }
    return out;
}

ActionId uct_select(std::span<const ActionStats> stats, double c, bool minimizing, RngStream& rng) {
    std::vector<ActionId> candidates;
    for (ActionId a = 0; a < stats.size(); ++a) {
        if (stats[a].visits == 0) {
            candidates.push_back(a);
        }
    }
    if (candidates.empty()) {
        std::uint64_t n = 0;
        for (const ActionStats& st : stats) {
            n += st.visits;
        }
        const double log_n = std::log(static_cast<double>(n));
        double best = -std::numeric_limits<double>::infinity();
        for (ActionId a = 0; a < stats.size(); ++a) {
            const double score = mover_value(stats[a].value, minimizing) +
                                 c * std::sqrt(log_n / static_cast<double>(stats[a].visits));
            if (score > best) {
                best = score;
                candidates.assign(1, a);
            } else if (score == best) {
                candidates.push_back(a);
            }
        }
    }
    return candidates[rng.uniform_index(candidates.size())];
}

double empirical_best_coefficient(std::span<const ActionStats> stats, bool minimizing) {
    bool any = false;
    double best = -std::numeric_limits<double>::infinity();
    for (const ActionStats& st : stats) {
        if (st.visits > 0) {
            any = true;
            best = std::max(best, mover_value(st.value, minimizing));
        }
    }
    return any ? std::abs(best) : 1.0;
}

void uct_update(ActionStats& stats, double ret) noexcept {
    ++stats.visits;
    stats.value += (ret - stats.value) / static_cast<double>(stats.visits);
}

int brue_switch(std::uint64_t n, int horizon) {
    if (n == 0 || horizon < 1) {
        throw ContractViolation("switching function needs n >= 1 and H >= 1");
    }
    return horizon - static_cast<int>((n - 1) % static_cast<std::uint64_t>(horizon));
}

void brue_alpha_update(ActionStats& stats, double ret, double alpha) {
    stats.rewards.push_back(ret);
    ++stats.visits;
    const auto n = stats.visits;
    auto window = static_cast<std::uint64_t>(std::ceil(alpha * static_cast<double>(n)));
    window = std::clamp<std::uint64_t>(window, 1, n);
    if (window == n) {
        // Same arithmetic as the running mean, so alpha = 1 reproduces it exactly.
        stats.value += (ret - stats.value) / static_cast<double>(n);
        return;
    }
    double sum = 0.0;
    for (auto it = stats.rewards.end() - static_cast<std::ptrdiff_t>(window); it != stats.rewards.end(); ++it) {
        sum += *it;
    }
    stats.value = sum / static_cast<double>(window);
}

namespace {

std::vector<ActionId> maximizers(std::span<const ActionStats> stats, bool minimizing) {
    std::vector<ActionId> best_actions;
    double best = -std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < stats.size(); ++a) {
        if (stats[a].visits == 0) {
            continue;
        }
        const double v = mover_value(stats[a].value, minimizing);
        if (best_actions.empty() || v > best) {
            best = v;
            best_actions.assign(1, a);
        } else if (v == best) {
            best_actions.push_back(a);
        }
    }
    return best_actions;
}

} // namespace

ActionId greedy_select(std::span<const ActionStats> stats, bool minimizing, RngStream& rng) {
    const auto best = maximizers(stats, minimizing);
    if (best.empty()) {
        return static_cast<ActionId>(rng.uniform_index(stats.size()));
    }
    return best[rng.uniform_index(best.size())];
}

std::optional<ActionId> recommend_best(std::span<const ActionStats> stats, bool minimizing,
                                       RngStream& rng) {
    const auto best = maximizers(stats, minimizing);
    if (best.empty()) {
        return std::nullopt;
    }
    return best[rng.uniform_index(best.size())];
}

ActionId epsilon_greedy_select(std::span<const ActionStats> stats, double epsilon, bool minimizing,
                               RngStream& rng) {
    if (rng.bernoulli(epsilon)) {
        return static_cast<ActionId>(rng.uniform_index(stats.size()));
    }
    return greedy_select(stats, minimizing, rng);
}

bool permissive_update_applies(std::span<const ActionStats> stats, ActionId chosen, bool minimizing) {
    for (const ActionStats& st : stats) {
        if (st.visits == 0) {
            return true;
        }
    }
    const auto best = maximizers(stats, minimizing);
    return std::find(best.begin(), best.end(), chosen) != best.end();
}

// ---------------------------------------------------------------- UCT

UctPlanner::UctPlanner(const GenerativeMdp& mdp, StateId root, int horizon,
                       const PlannerConfig& config, RngStream rng)
    : mdp_(mdp), horizon_(horizon), config_(config), rng_(rng), tree_(mdp, root, config.keying) {}

double UctPlanner::coefficient(SearchTree::NodeIndex node) const {
    if (config_.exploration == ExplorationMode::fixed) {
        return config_.exploration_c;
    }
    return empirical_best_coefficient(tree_.stats(node), tree_.node(node).minimizing);
}

void UctPlanner::run_iteration() {
    ++iterations_;
    last_updates_ = 0;
    trajectory_.clear();
    path_.clear();

    StateId s = tree_.node(tree_.root()).state;
    SearchTree::NodeIndex node = tree_.root();
    bool expanded = false;
    trajectory_.states.push_back(s);
    const int limit = config_.rollout_end == RolloutEnd::terminal ? kTerminalRolloutFactor * horizon_ : horizon_;
    for (int depth = 0; depth < limit && !mdp_.is_terminal(s); ++depth) {
        ActionId a = 0;
        if (node != SearchTree::npos) {
            const auto& info = tree_.node(node);
            if (depth == 0 && config_.algorithm == Algorithm::gct) {
                a = epsilon_greedy_select(tree_.stats(node), config_.epsilon, info.minimizing, rng_);
            } else {
                a = uct_select(tree_.stats(node), coefficient(node), info.minimizing, rng_);
            }
        } else {
            a = static_cast<ActionId>(rng_.uniform_index(mdp_.num_actions(s)));
        }
        const Transition tr = mdp_.sample_transition(s, a, rng_);
        path_.push_back(node);
        trajectory_.actions.push_back(a);
        trajectory_.rewards.push_back(tr.reward);
        trajectory_.states.push_back(tr.next);

        if (node != SearchTree::npos) {
            SearchTree::NodeIndex child = tree_.find_child(node, a, tr.next);
            if (child == SearchTree::npos && !expanded && depth + 1 < horizon_ &&
                !mdp_.is_terminal(tr.next)) {
                child = tree_.add_child(node, a, tr.next);
                expanded = true;
            }
            node = child;
        }
        s = tr.next;
    }

    double ret = 0.0;
    for (std::size_t i = path_.size(); i-- > 0;) {
        ret += trajectory_.rewards[i];
        if (path_[i] != SearchTree::npos) {
            uct_update(tree_.stats(path_[i])[trajectory_.actions[i]], ret);
            notify(path_[i], trajectory_.actions[i], ret);
        }
    }
}

ActionId UctPlanner::recommend(RngStream& rng) const {
    const auto stats = tree_.stats(tree_.root());
    if (config_.uct_recommendation == Recommendation::max_visits) {
        std::vector<ActionId> best;
        std::uint64_t most = 0;
        for (ActionId a = 0; a < stats.size(); ++a) {
            if (stats[a].visits > most) {
                most = stats[a].visits;
                best.assign(1, a);
            } else if (stats[a].visits == most && most > 0) {
                best.push_back(a);
            }
        }
        if (best.empty()) {
            throw InsufficientBudget("no root action has been sampled");
        }
        return best[rng.uniform_index(best.size())];
    }
    const auto a = recommend_best(stats, tree_.node(tree_.root()).minimizing, rng);
    if (!a) {
        throw InsufficientBudget("no root action has been sampled");
    }
    return *a;
}

// ---------------------------------------------------------------- BRUE

BruePlanner::BruePlanner(const GenerativeMdp& mdp, StateId root, int horizon,
                         const PlannerConfig& config, RngStream rng)
    : mdp_(mdp), horizon_(horizon), config_(config), rng_(rng), tree_(mdp, root, config.keying) {}

void BruePlanner::credit(SearchTree::NodeIndex node, ActionId a, double ret) {
    ActionStats& st = tree_.stats(node)[a];
    if (config_.algorithm == Algorithm::brue) {
        uct_update(st, ret);
    } else {
        brue_alpha_update(st, ret, config_.alpha);
    }
    notify(node, a, ret);
}

void BruePlanner::run_iteration() {
    ++iterations_;
    last_updates_ = 0;
    trajectory_.clear();
    path_.clear();

    const int sigma = brue_switch(iterations_, horizon_);
    trajectory_.switch_index = sigma;

    StateId s = tree_.node(tree_.root()).state;
    SearchTree::NodeIndex node = tree_.root();
    trajectory_.states.push_back(s);
    const int limit = config_.rollout_end == RolloutEnd::terminal ? kTerminalRolloutFactor * horizon_ : horizon_;
    for (int depth = 0; depth < limit && !mdp_.is_terminal(s); ++depth) {
        ActionId a = 0;
        if (depth < sigma) {
            a = static_cast<ActionId>(rng_.uniform_index(mdp_.num_actions(s)));
        } else if (node != SearchTree::npos) {
            a = greedy_select(tree_.stats(node), tree_.node(node).minimizing, rng_);
        } else {
            a = static_cast<ActionId>(rng_.uniform_index(mdp_.num_actions(s)));
        }
        const Transition tr = mdp_.sample_transition(s, a, rng_);
        path_.push_back(node);
        trajectory_.actions.push_back(a);
        trajectory_.rewards.push_back(tr.reward);
        trajectory_.states.push_back(tr.next);

        if (depth + 1 < sigma && !mdp_.is_terminal(tr.next)) {
            node = tree_.add_child(node, a, tr.next);
        } else {
            node = tree_.find_child(node, a, tr.next);
        }
        s = tr.next;
    }

    const auto k = static_cast<int>(trajectory_.length());
    if (k < sigma) {
        return; // terminated before reaching the switching point
    }
    const auto sw = static_cast<std::size_t>(sigma - 1);
    if (config_.update == UpdateMode::permissive) {
        std::vector<bool> qualifies(sw, false);
        for (std::size_t i = 0; i < sw; ++i) {
            qualifies[i] = permissive_update_applies(tree_.stats(path_[i]), trajectory_.actions[i],
                                                     tree_.node(path_[i]).minimizing);
        }
        for (std::size_t i = 0; i < sw; ++i) {
            if (qualifies[i]) {
                credit(path_[i], trajectory_.actions[i], trajectory_.reward_to_go(i));
            }
        }
    }
    credit(path_[sw], trajectory_.actions[sw], trajectory_.reward_to_go(sw));
}

ActionId BruePlanner::recommend(RngStream& rng) const {
    const auto a = recommend_best(tree_.stats(tree_.root()), tree_.node(tree_.root()).minimizing, rng);
    if (!a) {
        throw InsufficientBudget("no root action has been sampled");
    }
    return *a;
}

// ---------------------------------------------------------------- flat policies

FlatUniformPlanner::FlatUniformPlanner(const GenerativeMdp& mdp, StateId root, int horizon,
                                       const PlannerConfig& config, RngStream rng)
    : mdp_(mdp),
      root_(root),
      horizon_(horizon),
      crafty_(config.algorithm == Algorithm::crafty_uniform),
      rng_(rng),
      policies_(enumerate_flat_policies(mdp, root, horizon, config.policy_cap)),
      stats_(policies_.size()) {
    // The bandit reduction assumes a single maximizing agent.
    for (const FlatPolicy& p : policies_) {
        for (const auto& entry : p.entries) {
            if (mdp.minimizes(entry.first.state)) {
                throw CapabilityError(std::string(mdp.name()) +
                                      ": flat-policy planners need a single maximizing agent");
            }
        }
    }
    if (!crafty_) {
        return;
    }
    words_ = (policies_.size() + 63) / 64;
    for (const FlatPolicy& p : policies_) {
        for (const auto& [point, a] : p.entries) {
            if (!point_index_.contains(point)) {
                point_index_.emplace(point, point_first_row_.size());
                point_first_row_.push_back(0);
            }
        }
    }
    std::size_t rows = 0;
    for (auto& [point, idx] : point_index_) {
        point_first_row_[idx] = rows;
        rows += mdp.num_actions(point.state);
    }
    rows_.assign(rows * words_, 0);
    for (std::size_t i = 0; i < policies_.size(); ++i) {
        for (const auto& [point, a] : policies_[i].entries) {
            const std::size_t row = point_first_row_[point_index_.at(point)] + a;
            rows_[row * words_ + i / 64] |= 1ull << (i % 64);
        }
    }
    scratch_.resize(words_);
}

void FlatUniformPlanner::credit(std::size_t policy, double ret) {
    uct_update(stats_[policy], ret);
    notify(SearchTree::npos, static_cast<ActionId>(policy), ret);
}

void FlatUniformPlanner::run_iteration() {
    ++iterations_;
    last_updates_ = 0;
    trajectory_.clear();

    const std::size_t chosen = crafty_ ? 0 : (iterations_ - 1) % policies_.size();
    StateId s = root_;
    trajectory_.states.push_back(s);
    for (int depth = 0; depth < horizon_ && !mdp_.is_terminal(s); ++depth) {
        ActionId a = 0;
        if (crafty_) {
            a = static_cast<ActionId>(rng_.uniform_index(mdp_.num_actions(s)));
        } else {
            a = *policies_[chosen].action_at({depth, s});
        }
        const Transition tr = mdp_.sample_transition(s, a, rng_);
        trajectory_.actions.push_back(a);
        trajectory_.rewards.push_back(tr.reward);
        trajectory_.states.push_back(tr.next);
        s = tr.next;
    }
    const double ret = trajectory_.reward_to_go(0);
    if (!crafty_) {
        credit(chosen, ret);
        return;
    }
    std::fill(scratch_.begin(), scratch_.end(), ~0ull);
    if (policies_.size() % 64 != 0) {
        scratch_.back() = (1ull << (policies_.size() % 64)) - 1;
    }
    for (std::size_t i = 0; i < trajectory_.length(); ++i) {
        const auto it = point_index_.find({static_cast<int>(i), trajectory_.states[i]});
        const std::size_t row = point_first_row_[it->second] + trajectory_.actions[i];
        for (std::size_t w = 0; w < words_; ++w) {
            scratch_[w] &= rows_[row * words_ + w];
        }
    }
    for (std::size_t w = 0; w < words_; ++w) {
        for (std::uint64_t bits = scratch_[w]; bits != 0; bits &= bits - 1) {
            credit(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)), ret);
        }
    }
}

ActionId FlatUniformPlanner::recommend(RngStream& rng) const {
    std::vector<std::size_t> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < stats_.size(); ++i) {
        if (stats_[i].visits == 0) {
            continue;
        }
        if (best.empty() || stats_[i].value > best_value) {
            best_value = stats_[i].value;
            best.assign(1, i);
        } else if (stats_[i].value == best_value) {
            best.push_back(i);
        }
    }
    if (best.empty()) {
        throw InsufficientBudget("no flat policy has been sampled");
    }
    return policies_[best[rng.uniform_index(best.size())]].root_action();
}

std::unique_ptr<Planner> make_planner(const GenerativeMdp& mdp, StateId root,
                                      const PlannerConfig& config, RngStream rng) {
    config.validate();
    const int h = mdp.horizon();
    switch (config.algorithm) {
    case Algorithm::uct:
    case Algorithm::gct:
        return std::make_unique<UctPlanner>(mdp, root, h, config, rng);
    case Algorithm::brue:
    case Algorithm::brue_alpha:
    case Algorithm::brue_per_alpha:
        return std::make_unique<BruePlanner>(mdp, root, h, config, rng);
    case Algorithm::naive_uniform:
    case Algorithm::crafty_uniform:
        return std::make_unique<FlatUniformPlanner>(mdp, root, h, config, rng);
    }
    throw ConfigError("unknown algorithm");
}

ActionId mcts_plan(const GenerativeMdp& mdp, StateId root, std::uint64_t budget,
                   const PlannerConfig& config, RngStream rng) {
    if (budget < 1) {
        throw ContractViolation("planning budget must be at least one iteration");
    }
    auto planner = make_planner(mdp, root, config, rng);
    for (std::uint64_t i = 0; i < budget; ++i) {
        planner->run_iteration();
    }
    return planner->recommend();
}

} // namespace brue
