#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "brue/gametree.hpp"
#include "brue/mdp.hpp"

namespace brue {

/// Problem parameters the regret bounds are stated in.
struct BoundParams {
    std::size_t K = 0; ///< max applicable actions
    std::size_t B = 0; ///< max outcomes of an action
    double p = 1.0;    ///< min positive transition probability
    double d = 0.0;    ///< min one-step gap between best and second-best action
    int H = 0;
    bool degenerate = false; ///< d == 0: some one-step decision has tied optima

    friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

/**
 * Exact finite-horizon values for every (state, steps-to-go) pair reachable
 * from a set of start states. Layer h holds the pairs with h steps to go;
 * states within a layer are stored in ascending id order. Immutable once
 * built.
 */
class OracleTable {
public:
    struct Layer {
        std::vector<StateId> states;
        std::vector<double> values;
        std::vector<ActionId> best;
        std::vector<std::uint8_t> minimizing;
        std::vector<std::uint64_t> q_begin; ///< size states + 1
        std::vector<double> q;

        friend bool operator==(const Layer&, const Layer&) = default;
    };

    OracleTable() = default;
    OracleTable(std::vector<Layer> layers, BoundParams params);

    int horizon() const noexcept { return static_cast<int>(layers_.size()) - 1; }
    const BoundParams& params() const noexcept { return params_; }
    void set_params(const BoundParams& params) { params_ = params; }

    bool contains(StateId s, int h) const noexcept;
    double value(StateId s, int h) const;
    double q(StateId s, int h, ActionId a) const;
    std::span<const double> q_values(StateId s, int h) const;
    ActionId optimal_action(StateId s, int h) const;
    bool minimizing(StateId s, int h) const;

    /// Regret of `a` is within `tol` of zero.
    bool is_optimal(StateId s, int h, ActionId a, double tol = 1e-9) const;

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::size_t entry_count() const noexcept;

    friend bool operator==(const OracleTable& a, const OracleTable& b) {
        return a.layers_ == b.layers_ && a.params_ == b.params_;
    }

private:
    std::size_t index_of(StateId s, int h) const;
    void build_index();

    std::vector<Layer> layers_;
    std::vector<std::unordered_map<StateId, std::uint32_t>> index_;
    BoundParams params_;
};

/// Default cap on stored Q cells.
inline constexpr std::uint64_t kDefaultOracleCap = 20'000'000;

/**
 * Backward induction over the pairs reachable from `starts` within
 * `horizon` steps. MIN states take the minimum. Throws CapabilityError for
 * non-enumerable models and ResourceError when the Q cells exceed `cap`.
 */
OracleTable build_oracle(const GenerativeMdp& mdp, int horizon, std::span<const StateId> starts,
                         std::uint64_t cap = kDefaultOracleCap);

/// K, B, p over the table's non-terminal pairs; d over its one-step layer.
BoundParams extract_params(const GenerativeMdp& mdp, const OracleTable& oracle);

/// Largest absolute Bellman residual of the table, recomputed from outcomes.
double bellman_residual(const GenerativeMdp& mdp, const OracleTable& oracle);

/**
 * Exhaustive minimax over a game tree in raw payoff units. Stores every
 * internal node; throws ResourceError if branching^depth exceeds `leaf_cap`.
 */
OracleTable minimax_oracle(const GameTreeSpec& spec, std::uint64_t leaf_cap = 1ull << 24);

} // namespace brue
