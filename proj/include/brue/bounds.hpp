#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace brue {

/// Natural-log constants of the BRUE regret bound E r_n <= H c e^{-c' n}.
struct BoundConstants {
    double log_c = 0.0;
    double log_c_prime = 0.0;
    /// ln(c) / c': iterations after which c e^{-c' n} drops below one.
    double transition_n = 0.0;
    /// log(transition_n); finite even when transition_n overflows.
    double log_transition_n = 0.0;
    /// Per-level constants, index h-1 for h = 1..H.
    std::vector<double> log_c_h;
    std::vector<double> log_c_h_prime;
    /// The h = 1 induction basis: c_1 = 1, c_1' = d^2 / 2.
    double log_c1_basis = 0.0;
    double log_c1_prime_basis = 0.0;
    /// Direct values of c and c' when representable as finite doubles.
    std::optional<double> c;
    std::optional<double> c_prime;
};

/// Throws ConfigError on parameters outside p, d in (0, 1], K >= 2, H >= 1,
/// and DegenerateInstance when d == 0.
void validate_bound_params(double p, double d, std::uint64_t K, int H);

/// Theorem-level constants c, c' and the transition point, in log space.
BoundConstants theorem1_constants(double p, double d, std::uint64_t K, int H);

/// log c_h for h in 1..H.
double lemma1_log_c(double p, double d, std::uint64_t K, int H, int h);
/// log c_h' for h in 1..H.
double lemma1_log_c_prime(double p, double d, std::uint64_t K, int H, int h);

/// Per-level constants only (log_c/log_c_prime of the result are those of level H).
BoundConstants lemma1_constants(double p, double d, std::uint64_t K, int H);

struct FlatBounds {
    /// NaiveUniform expected simple regret bound and its log.
    double naive = 0.0;
    double log_naive = 0.0;
    /// CraftyUniform expected simple regret bound and its log.
    double crafty = 0.0;
    double log_crafty = 0.0;
    /// Choice-error probability bounds (the regret bounds without the factor H).
    double naive_choice = 0.0;
    double crafty_choice = 0.0;
    /// Iterations after which the Crafty bound is below the trivial bound H.
    double crafty_transition = 0.0;
};

/// Regret bounds for NaiveUniform and CraftyUniform after n iterations.
FlatBounds naive_crafty_bounds(std::uint64_t K, std::uint64_t B, int H, double d, std::uint64_t n);

/// Tail bound for a contaminated martingale-like sum of t variables in [0, h].
double azuma_bound(double h, double delta, double c_p, double c_e, double t);

/// Alternative bound family; beta = 1 would be the limit of the exponent.
double azuma_bound_beta(double h, double delta, double c_p, double c_e, double t, double beta);

/// Tail bound for the mean of the last ceil(alpha t) variables; alpha = 1
/// gives azuma_bound.
double azuma_window_bound(double h, double delta, double c_p, double c_e, double t, double alpha);

} // namespace brue
