#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "brue/mdp.hpp"

namespace brue {

enum class Tack : std::uint8_t { none = 0, port = 1, starboard = 2 };

/// Compass directions, clockwise from north: N, NE, E, SE, S, SW, W, NW.
inline constexpr std::array<int, 8> kDirDx = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr std::array<int, 8> kDirDy = {1, 1, 0, -1, -1, -1, 0, 1};

struct SailingState {
    int x = 0;
    int y = 0;
    int wind = 0; ///< direction the wind blows towards, 0..7
    Tack tack = Tack::none;

    friend bool operator==(const SailingState&, const SailingState&) = default;
};

/**
 * Sailing-domain parameters.
 *
 * Move costs are indexed by the clockwise angle between the heading and the
 * wind, in 45 degree steps, skipping the forbidden into-wind heading:
 * {0, 45, 90, 135, 225, 270, 315}. Index 0 is a tail wind.
 */
struct SailingConfig {
    int grid_size = 5;
    int goal_x = -1; ///< -1 selects grid_size - 1
    int goal_y = -1;
    double wind_persist_prob = 0.4;
    double wind_rotate_prob = 0.3; ///< each of clockwise and counter-clockwise
    std::array<double, 7> move_cost = {1.0, 2.0, 3.0, 4.0, 4.0, 3.0, 2.0};
    double tack_change_penalty = 3.0;
    double diagonal_factor = std::sqrt(2.0);

    int resolved_goal_x() const { return goal_x < 0 ? grid_size - 1 : goal_x; }
    int resolved_goal_y() const { return goal_y < 0 ? grid_size - 1 : goal_y; }

    /// Throws ConfigError.
    void validate() const;

    std::string to_text() const;
};

class SailingMdp final : public GenerativeMdp {
public:
    explicit SailingMdp(SailingConfig config);

    const SailingConfig& config() const noexcept { return config_; }

    std::string_view name() const override { return "sailing"; }
    int horizon() const override { return 4 * config_.grid_size; }
    RewardRange reward_range() const override;
    std::size_t num_actions(StateId s) const override;
    Transition sample_transition(StateId s, ActionId a, RngStream& rng) const override;
    bool is_terminal(StateId s) const override;
    bool is_enumerable() const override { return true; }
    std::vector<Outcome> enumerate_outcomes(StateId s, ActionId a) const override;
    std::string config_text() const override { return config_.to_text(); }
    std::string describe_state(StateId s) const override;

    StateId encode(const SailingState& st) const;
    SailingState decode(StateId s) const;

    std::size_t state_count() const noexcept;

    /// Canonical absorbing state for every arrival at the goal cell.
    StateId goal_state() const;

    /// Compass direction of applicable action `a` at `s`.
    int heading(StateId s, ActionId a) const;

    /// Cost of sailing `heading` from `s` (before the wind changes).
    double move_cost(const SailingState& from, int heading) const;

    /// Tack after sailing `heading` under `wind`.
    static Tack tack_for(int heading, int wind);

    /// Every non-goal (position, wind, tack) triple, in id order.
    std::vector<StateId> non_goal_states() const;

private:
    struct StateInfo {
        std::array<std::uint8_t, 8> headings{};
        std::uint8_t count = 0;
    };

    bool is_goal_cell(int x, int y) const noexcept {
        return x == goal_x_ && y == goal_y_;
    }
    StateId next_state(const SailingState& from, int heading, int new_wind) const;

    SailingConfig config_;
    int goal_x_;
    int goal_y_;
    std::vector<StateInfo> info_;
};

} // namespace brue
