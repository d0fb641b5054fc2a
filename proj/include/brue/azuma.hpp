#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace brue {

/**
 * Sequence X_1, X_2, ... on [0, h]. Each X_i is uniform on
 * [mu - w, mu + w] with w = min(mu, h - mu), except that with probability
 * min(1, c_p e^{-c_e i}) it is drawn uniformly from [mu, h] instead, so its
 * conditional mean differs from mu with at most that probability.
 *
 * The event checked at length t is that the mean of the last ceil(alpha t)
 * variables is at least mu + delta; alpha = 1 is the full sum
 * X_1 + ... + X_t >= mu t + t delta.
 */
struct AzumaScenario {
    double h = 1.0;
    std::optional<double> mu; ///< default h / 2
    double delta = 0.25;
    double c_p = 0.0;
    double c_e = 1.0;
    double alpha = 1.0;
    /// Use the beta-family bound instead of the default one (alpha = 1 only).
    std::optional<double> beta;

    double mean() const noexcept { return mu.value_or(h / 2); }
    /// Throws ConfigError.
    void validate() const;
    double bound(double t) const;
};

struct AzumaRow {
    AzumaScenario scenario;
    std::uint64_t t = 0;
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double empirical = 0.0;
    double ci_lower = 0.0; ///< one-sided 99% Clopper-Pearson
    double ci_upper = 0.0; ///< one-sided 99% Clopper-Pearson
    double bound = 0.0;
    /// ci_lower > bound: the sample shows the tail exceeds the bound.
    bool violation = false;
    /// ci_upper > bound without a violation: too few trials to resolve it.
    bool resolution_limited = false;
};

/**
 * Monte-Carlo tail check. Scenarios sharing (h, mu, c_p, c_e) are evaluated
 * on the same sample paths. Rows are ordered by scenario, then t.
 */
std::vector<AzumaRow> azuma_check(const std::vector<AzumaScenario>& scenarios,
                                  const std::vector<std::uint64_t>& t_grid, std::uint64_t trials,
                                  std::uint64_t seed, unsigned jobs = 1);

/// h in {1, 2}, delta in {h/4, h/2}, c_e in {0.1, 1}, c_p in {0, 1, 10}, alpha in {0.5, 1}.
std::vector<AzumaScenario> default_azuma_grid();

std::vector<std::uint64_t> default_azuma_t_grid();

void write_azuma_csv(std::ostream& out, const std::vector<AzumaRow>& rows);

} // namespace brue
