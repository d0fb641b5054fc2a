#include "brue/bounds.hpp"

#include <cmath>
#include <limits>

#include "brue/errors.hpp"
#include "brue/format.hpp"

namespace brue {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// sum_{i=1}^{m} log(i!)
double sum_log_factorials(int m) {
    double s = 0.0;
    for (int i = 1; i <= m; ++i) {
        s += log_factorial(i);
    }
    return s;
}

std::optional<double> finite_exp(double x) {
    const double v = std::exp(x);
    if (!std::isfinite(v) || v == 0.0) {
        return std::nullopt;
    }
    return v;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

} // namespace

void validate_bound_params(double p, double d, std::uint64_t K, int H) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw ConfigError("p must lie in (0, 1], got " + format_real(p));
    }
    if (d == 0.0) {
        throw DegenerateInstance("d = 0: the optimal one-step action is not unique somewhere, so "
                                 "the bound constants are undefined");
    }
    if (!(d > 0.0 && d <= 1.0)) {
        throw ConfigError("d must lie in (0, 1], got " + format_real(d));
    }
    if (K < 2) {
        throw ConfigError("K must be at least 2");
    }
    if (H < 1) {
        throw ConfigError("H must be at least 1");
    }
}

double lemma1_log_c(double p, double d, std::uint64_t K, int H, int h) {
    const double lk = std::log(static_cast<double>(K));
    const double hh = h;
    const double HH = H;
    return (2 * HH * hh + hh * hh - 2 * HH - 1) * lk + 3 * log_factorial(h) + 4 * sum_log_factorials(h - 1) +
           (hh - 1) * std::log(24.0) + (hh - 1) * (hh - 1) * std::log(16.0) -
           2 * (hh - 1) * (hh - 1) * std::log(d) - (2 * HH * hh + hh * hh - 2 * HH - hh) * std::log(p);
}

double lemma1_log_c_prime(double p, double d, std::uint64_t K, int H, int h) {
    const double lk = std::log(static_cast<double>(K));
    const double hh = h;
    const double HH = H;
    return std::log(3.0) + 2 * (hh - 1) * std::log(d) + (HH + hh - 1) * std::log(p) -
           (hh - 1) * std::log(16.0) - 2 * log_factorial(h) - (HH + hh - 1) * lk;
}

BoundConstants lemma1_constants(double p, double d, std::uint64_t K, int H) {
    validate_bound_params(p, d, K, H);
    BoundConstants r;
    for (int h = 1; h <= H; ++h) {
        r.log_c_h.push_back(lemma1_log_c(p, d, K, H, h));
        r.log_c_h_prime.push_back(lemma1_log_c_prime(p, d, K, H, h));
    }
    r.log_c = r.log_c_h.back();
    r.log_c_prime = r.log_c_h_prime.back();
    r.log_c1_basis = 0.0;
    r.log_c1_prime_basis = 2 * std::log(d) - std::log(2.0);
    return r;
}

BoundConstants theorem1_constants(double p, double d, std::uint64_t K, int H) {
    BoundConstants r = lemma1_constants(p, d, K, H);
    const double lk = std::log(static_cast<double>(K));
    const double HH = H;
    r.log_c = std::log(4.0) + (3 * HH * HH - 2 * HH) * lk + 3 * log_factorial(H) +
              4 * sum_log_factorials(H - 1) + (HH - 1) * std::log(24.0) +
              (HH - 1) * (HH - 1) * std::log(16.0) - (2 * HH * HH - 4 * HH + 2) * std::log(d) -
              (3 * HH * HH - 3 * HH) * std::log(p);
    r.log_c_prime = std::log(3.0) + (2 * HH - 2) * std::log(d) + (2 * HH - 1) * std::log(p) -
                    std::log(2.0) - std::log(HH) - (HH - 1) * std::log(16.0) - 2 * log_factorial(H) -
                    2 * HH * lk;
    r.log_transition_n = std::log(r.log_c) - r.log_c_prime;
    r.transition_n = std::exp(r.log_transition_n);

    // Direct evaluation, exact where the products are representable.
    const double Kd = static_cast<double>(K);
    double prod = 1.0;
    for (int h = 1; h <= H - 1; ++h) {
        prod *= std::pow(factorial(h), 4);
    }
    const double c = 4 * std::pow(Kd, 3 * HH * HH - 2 * HH) * std::pow(factorial(H), 3) * prod *
                     std::pow(24.0, HH - 1) * std::pow(16.0, (HH - 1) * (HH - 1)) /
                     (std::pow(d, 2 * HH * HH - 4 * HH + 2) * std::pow(p, 3 * HH * HH - 3 * HH));
    const double cp = 3 * std::pow(d, 2 * HH - 2) * std::pow(p, 2 * HH - 1) /
                      (2 * HH * std::pow(16.0, HH - 1) * std::pow(factorial(H), 2) * std::pow(Kd, 2 * HH));
    if (std::isfinite(c) && c > 0.0) {
        r.c = c;
    } else {
        r.c = finite_exp(r.log_c);
    }
    if (std::isfinite(cp) && cp > 0.0) {
        r.c_prime = cp;
    } else {
        r.c_prime = finite_exp(r.log_c_prime);
    }
    return r;
}

FlatBounds naive_crafty_bounds(std::uint64_t K, std::uint64_t B, int H, double d, std::uint64_t n) {
    if (K < 1 || B < 1 || H < 1 || !(d > 0.0)) {
        throw ConfigError("flat-policy bounds need K, B, H >= 1 and d > 0");
    }
    const double lk = std::log(static_cast<double>(K));
    const double HH = H;
    const double log_arms = std::pow(static_cast<double>(B), HH) * lk; // log K^{B^H}
    const double arms = std::exp(log_arms);
    const double sweeps = std::floor(static_cast<double>(n) / arms);
    const double nn = static_cast<double>(n);

    FlatBounds r;
    r.log_naive = std::log(HH) + log_arms - sweeps * d * d / (2 * HH * HH);
    r.log_crafty = std::log(4.0) + std::log(HH) + log_arms -
                   nn * d * d / (4 * std::exp(2 * HH * lk) * HH * HH);
    r.naive = std::exp(r.log_naive);
    r.crafty = std::exp(r.log_crafty);
    r.naive_choice = std::exp(r.log_naive - std::log(HH));
    r.crafty_choice = std::exp(r.log_crafty - std::log(HH));
    r.crafty_transition = std::pow(static_cast<double>(K * K * B), HH) * 4 * (HH / d) * (HH / d) * lk;
    return r;
}

namespace {

void validate_azuma(double h, double delta, double c_p, double c_e) {
    if (!(h > 0.0)) {
        throw ConfigError("support bound h must be positive");
    }
    if (!(delta > 0.0 && delta <= h / 2)) {
        throw ConfigError("delta must lie in (0, h/2]");
    }
    if (!(c_p >= 0.0)) {
        throw ConfigError("c_p must be nonnegative");
    }
    if (!(c_e > 0.0 && c_e <= 1.0)) {
        throw ConfigError("c_e must lie in (0, 1]");
    }
}

} // namespace

double azuma_bound(double h, double delta, double c_p, double c_e, double t) {
    validate_azuma(h, delta, c_p, c_e);
    const double bracket = 1.0 + c_p * 2 * h * h / (delta * delta * c_e * c_e);
    return bracket * std::exp(-3 * delta * delta * c_e * t / (2 * h * h));
}

double azuma_bound_beta(double h, double delta, double c_p, double c_e, double t, double beta) {
    validate_azuma(h, delta, c_p, c_e);
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ConfigError("beta must lie in [0, 1)");
    }
    const double bracket =
        1.0 + c_p / (c_e * (1 - beta)) * std::exp(-c_e * (1 - beta) / (2 * h * h));
    return bracket * std::exp(-3 * delta * delta * c_e * beta * t / (2 * h * h));
}

double azuma_window_bound(double h, double delta, double c_p, double c_e, double t, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ConfigError("alpha must lie in (0, 1]");
    }
    if (alpha == 1.0) {
        return azuma_bound(h, delta, c_p, c_e, t);
    }
    validate_azuma(h, delta, c_p, c_e);
    const double bracket =
        1.0 + c_p / (c_e * (1 - alpha)) * std::exp(-c_e * (1 - alpha) * (1 - alpha) * t);
    return bracket * std::exp(-3 * delta * delta * c_e * alpha * t / (2 * h * h));
}

} // namespace brue
