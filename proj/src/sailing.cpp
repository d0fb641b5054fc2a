#include "brue/sailing.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "brue/errors.hpp"
#include "brue/format.hpp"

namespace brue {

void SailingConfig::validate() const {
    if (grid_size < 2) {
        throw ConfigError("sailing: grid_size must be at least 2");
    }
    const int gx = resolved_goal_x();
    const int gy = resolved_goal_y();
    if (gx >= grid_size || gy >= grid_size) {
        throw ConfigError("sailing: goal lies outside the grid");
    }
    if (wind_persist_prob < 0.0 || wind_rotate_prob < 0.0 ||
        std::abs(wind_persist_prob + 2.0 * wind_rotate_prob - 1.0) > 1e-12) {
        throw ConfigError("sailing: wind_persist_prob + 2 * wind_rotate_prob must equal 1");
    }
    for (double c : move_cost) {
        if (!(c > 0.0)) {
            throw ConfigError("sailing: move costs must be positive");
        }
    }
    if (tack_change_penalty < 0.0 || !(diagonal_factor > 0.0)) {
        throw ConfigError("sailing: invalid tack penalty or diagonal factor");
    }
}

std::string SailingConfig::to_text() const {
    std::ostringstream out;
    out << "domain=sailing\n"
        << "grid_size=" << grid_size << '\n'
        << "goal=" << resolved_goal_x() << ',' << resolved_goal_y() << '\n'
        << "wind_persist_prob=" << format_real(wind_persist_prob) << '\n'
        << "wind_rotate_prob=" << format_real(wind_rotate_prob) << '\n'
        << "move_cost=";
    for (std::size_t i = 0; i < move_cost.size(); ++i) {
        out << (i ? "," : "") << format_real(move_cost[i]);
    }
    out << '\n'
        << "tack_change_penalty=" << format_real(tack_change_penalty) << '\n'
        << "diagonal_factor=" << format_real(diagonal_factor) << '\n';
    return out.str();
}

namespace {

constexpr int kWinds = 8;
constexpr int kTacks = 3;

int relative_angle(int heading, int wind) {
    return ((heading - wind) % 8 + 8) % 8;
}

} // namespace

SailingMdp::SailingMdp(SailingConfig config) : config_(config) {
    config_.validate();
    goal_x_ = config_.resolved_goal_x();
    goal_y_ = config_.resolved_goal_y();

    const int n = config_.grid_size;
    info_.resize(state_count());
    for (std::uint64_t id = 0; id < info_.size(); ++id) {
        const SailingState st = decode(StateId{id});
        if (is_goal_cell(st.x, st.y)) {
            continue;
        }
        StateInfo& info = info_[id];
        for (int h = 0; h < 8; ++h) {
            const int nx = st.x + kDirDx[h];
            const int ny = st.y + kDirDy[h];
            if (nx < 0 || ny < 0 || nx >= n || ny >= n || relative_angle(h, st.wind) == 4) {
                continue;
            }
            info.headings[info.count++] = static_cast<std::uint8_t>(h);
        }
    }
}

std::size_t SailingMdp::state_count() const noexcept {
    const auto n = static_cast<std::size_t>(config_.grid_size);
    return n * n * kWinds * kTacks;
}

StateId SailingMdp::encode(const SailingState& st) const {
    const std::uint64_t n = static_cast<std::uint64_t>(config_.grid_size);
    const std::uint64_t cell = static_cast<std::uint64_t>(st.y) * n + static_cast<std::uint64_t>(st.x);
    return StateId{(cell * kWinds + static_cast<std::uint64_t>(st.wind)) * kTacks +
                   static_cast<std::uint64_t>(st.tack)};
}

SailingState SailingMdp::decode(StateId s) const {
    const std::uint64_t n = static_cast<std::uint64_t>(config_.grid_size);
    SailingState st;
    std::uint64_t v = s.value;
    st.tack = static_cast<Tack>(v % kTacks);
    v /= kTacks;
    st.wind = static_cast<int>(v % kWinds);
    v /= kWinds;
    st.x = static_cast<int>(v % n);
    st.y = static_cast<int>(v / n);
    return st;
}

StateId SailingMdp::goal_state() const {
    return encode(SailingState{goal_x_, goal_y_, 0, Tack::none});
}

RewardRange SailingMdp::reward_range() const {
    const auto [lo, hi] = std::minmax_element(config_.move_cost.begin(), config_.move_cost.end());
    const double worst = *hi * std::max(1.0, config_.diagonal_factor) + config_.tack_change_penalty;
    const double best = *lo * std::min(1.0, config_.diagonal_factor);
    return {-worst, -best};
}

bool SailingMdp::is_terminal(StateId s) const {
    return info_.at(s.value).count == 0;
}

std::size_t SailingMdp::num_actions(StateId s) const {
    return info_.at(s.value).count;
}

int SailingMdp::heading(StateId s, ActionId a) const {
    const StateInfo& info = info_.at(s.value);
    if (a >= info.count) {
        throw ContractViolation("sailing: inapplicable action");
    }
    return info.headings[a];
}

Tack SailingMdp::tack_for(int heading, int wind) {
    const int rel = relative_angle(heading, wind);
    if (rel == 0) {
        return Tack::none;
    }
    return rel < 4 ? Tack::port : Tack::starboard;
}

double SailingMdp::move_cost(const SailingState& from, int heading) const {
    const int rel = relative_angle(heading, from.wind);
    double cost = config_.move_cost[static_cast<std::size_t>(rel < 4 ? rel : rel - 1)];
    if (heading % 2 == 1) {
        cost *= config_.diagonal_factor;
    }
    const Tack next = tack_for(heading, from.wind);
    if (from.tack != Tack::none && next != Tack::none && next != from.tack) {
        cost += config_.tack_change_penalty;
    }
    return cost;
}

StateId SailingMdp::next_state(const SailingState& from, int heading, int new_wind) const {
    const int nx = from.x + kDirDx[heading];
    const int ny = from.y + kDirDy[heading];
    if (is_goal_cell(nx, ny)) {
        return goal_state();
    }
    return encode(SailingState{nx, ny, new_wind, tack_for(heading, from.wind)});
}

Transition SailingMdp::sample_transition(StateId s, ActionId a, RngStream& rng) const {
    const SailingState st = decode(s);
    const int h = heading(s, a);
    const double u = rng.uniform();
    int wind = st.wind;
    if (u >= config_.wind_persist_prob) {
        wind = u < config_.wind_persist_prob + config_.wind_rotate_prob ? (wind + 1) % 8
                                                                       : (wind + 7) % 8;
    }
    return {next_state(st, h, wind), -move_cost(st, h)};
}

std::vector<Outcome> SailingMdp::enumerate_outcomes(StateId s, ActionId a) const {
    const SailingState st = decode(s);
    const int h = heading(s, a);
    const double reward = -move_cost(st, h);
    const std::array<std::pair<int, double>, 3> winds = {
        std::pair{st.wind, config_.wind_persist_prob},
        std::pair{(st.wind + 1) % 8, config_.wind_rotate_prob},
        std::pair{(st.wind + 7) % 8, config_.wind_rotate_prob}};

    std::vector<Outcome> out;
    for (const auto& [wind, prob] : winds) {
        if (prob <= 0.0) {
            continue;
        }
        const StateId next = next_state(st, h, wind);
        auto same = std::find_if(out.begin(), out.end(),
                                 [&](const Outcome& o) { return o.next == next; });
        if (same != out.end()) {
            same->probability += prob;
        } else {
            out.push_back({next, prob, reward});
        }
    }
    return out;
}

std::vector<StateId> SailingMdp::non_goal_states() const {
    std::vector<StateId> states;
    for (std::uint64_t id = 0; id < info_.size(); ++id) {
        const SailingState st = decode(StateId{id});
        if (!is_goal_cell(st.x, st.y)) {
            states.push_back(StateId{id});
        }
    }
    return states;
}

std::string SailingMdp::describe_state(StateId s) const {
    const SailingState st = decode(s);
    static constexpr const char* kTackNames[] = {"none", "port", "starboard"};
    char buf[96];
    std::snprintf(buf, sizeof buf, "(x=%d,y=%d,wind=%d,tack=%s)", st.x, st.y, st.wind,
                  kTackNames[static_cast<int>(st.tack)]);
    return buf;
}

} // namespace brue
