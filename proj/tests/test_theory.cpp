#include <doctest.h>

#include <cmath>

#include "brue/azuma.hpp"
#include "brue/bounds.hpp"
#include "brue/errors.hpp"
#include "brue/stats.hpp"

using namespace brue;

namespace {

// Direct products, long double; valid while everything stays representable.
long double factorial(int n) {
    long double f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

long double ipow(long double x, int e) {
    long double r = 1;
    for (int i = 0; i < std::abs(e); ++i) {
        r *= x;
    }
    return e < 0 ? 1 / r : r;
}

long double direct_c(long double p, long double d, int K, int H) {
    long double prod = 1;
    for (int h = 1; h <= H - 1; ++h) {
        prod *= ipow(factorial(h), 4);
    }
    return 4 * ipow(K, 3 * H * H - 2 * H) * ipow(factorial(H), 3) * prod * ipow(24, H - 1) *
           ipow(16, (H - 1) * (H - 1)) / (ipow(d, 2 * H * H - 4 * H + 2) * ipow(p, 3 * H * H - 3 * H));
}

long double direct_c_prime(long double p, long double d, int K, int H) {
    return 3 * ipow(d, 2 * H - 2) * ipow(p, 2 * H - 1) /
           (2 * H * ipow(16, H - 1) * ipow(factorial(H), 2) * ipow(K, 2 * H));
}

long double direct_c_h(long double p, long double d, int K, int H, int h) {
    long double prod = 1;
    for (int i = 1; i <= h - 1; ++i) {
        prod *= ipow(factorial(i), 4);
    }
    return ipow(K, 2 * H * h + h * h - 2 * H - 1) * ipow(factorial(h), 3) * prod * ipow(24, h - 1) *
           ipow(16, (h - 1) * (h - 1)) /
           (ipow(d, 2 * (h - 1) * (h - 1)) * ipow(p, 2 * H * h + h * h - 2 * H - h));
}

long double direct_c_h_prime(long double p, long double d, int K, int H, int h) {
    return 3 * ipow(d, 2 * (h - 1)) * ipow(p, H + h - 1) /
           (ipow(16, h - 1) * ipow(factorial(h), 2) * ipow(K, H + h - 1));
}

const double kPs[] = {0.1, 0.3, 0.5, 1.0};
const double kDs[] = {0.05, 0.2, 0.5};
const int kKs[] = {2, 3};

} // namespace

TEST_CASE("theorem constants at H = 1") {
    const BoundConstants b = theorem1_constants(0.5, 0.3, 2, 1);
    REQUIRE(b.c.has_value());
    REQUIRE(b.c_prime.has_value());
    CHECK(*b.c == 8.0);
    CHECK(*b.c_prime == 0.1875);
    for (double p : kPs) {
        for (int K : kKs) {
            const BoundConstants t = theorem1_constants(p, 0.2, K, 1);
            CHECK(*t.c == 4.0 * K);
            CHECK(*t.c_prime == 3 * p / (2.0 * K * K));
        }
    }
}

TEST_CASE("theorem constants match the direct products") {
    for (double p : kPs) {
        for (double d : kDs) {
            for (int K : kKs) {
                for (int H = 1; H <= 4; ++H) {
                    const BoundConstants b = theorem1_constants(p, d, K, H);
                    const long double c = direct_c(p, d, K, H);
                    const long double cp = direct_c_prime(p, d, K, H);
                    REQUIRE(b.log_c == doctest::Approx(static_cast<double>(std::log(c))).epsilon(1e-12));
                    REQUIRE(b.log_c_prime ==
                            doctest::Approx(static_cast<double>(std::log(cp))).epsilon(1e-12));
                    REQUIRE(b.transition_n ==
                            doctest::Approx(static_cast<double>(std::log(c) / cp)).epsilon(1e-10));
                    for (int h = 1; h <= H; ++h) {
                        REQUIRE(b.log_c_h[h - 1] ==
                                doctest::Approx(static_cast<double>(std::log(direct_c_h(p, d, K, H, h))))
                                    .epsilon(1e-12));
                        REQUIRE(b.log_c_h_prime[h - 1] ==
                                doctest::Approx(
                                    static_cast<double>(std::log(direct_c_h_prime(p, d, K, H, h))))
                                    .epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("theorem constants at H = 4") {
    const BoundConstants b = theorem1_constants(0.3, 0.1, 2, 4);
    CHECK(b.log_c == doctest::Approx(167.86298229454192).epsilon(1e-13));
    CHECK(b.log_c_prime == doctest::Approx(-43.443200713152351).epsilon(1e-13));
    CHECK(b.transition_n == doctest::Approx(1.2362243126956143e+21).epsilon(1e-12));
    CHECK(std::isfinite(b.log_transition_n));
}

TEST_CASE("bound constants grow as expected") {
    for (double p : kPs) {
        for (double d : kDs) {
            for (int K : kKs) {
                double prev_log_c = -INFINITY;
                for (int H = 1; H <= 6; ++H) {
                    const BoundConstants b = theorem1_constants(p, d, K, H);
                    CHECK(b.log_c > prev_log_c);
                    prev_log_c = b.log_c;
                    CHECK(b.log_c_h[0] == 0.0);
                    CHECK(b.log_c_h_prime[0] ==
                          doctest::Approx(std::log(3.0) + H * std::log(p / K)).epsilon(1e-14));
                    CHECK(b.log_c1_prime_basis == doctest::Approx(std::log(d * d / 2)).epsilon(1e-14));
                    for (int h = 2; h <= H; ++h) {
                        CHECK(b.log_c_h[h - 1] > b.log_c_h[h - 2]);
                        CHECK(b.log_c_h_prime[h - 1] < b.log_c_h_prime[h - 2]);
                        CHECK(b.log_c_h_prime[h - 1] < std::log(p / K) + b.log_c_h_prime[h - 2]);
                    }
                }
            }
        }
    }
}

TEST_CASE("bound constants stay finite in log space") {
    for (int H = 1; H <= 12; ++H) {
        const BoundConstants b = theorem1_constants(0.05, 0.01, 10, H);
        CHECK(std::isfinite(b.log_c));
        CHECK(std::isfinite(b.log_c_prime));
        CHECK(std::isfinite(b.log_transition_n));
        for (double v : b.log_c_h) {
            CHECK(std::isfinite(v));
        }
    }
    CHECK_FALSE(theorem1_constants(0.05, 0.01, 10, 12).c.has_value());
    // log(ln c / c') grows at most quadratically in H.
    for (double p : kPs) {
        const double base = theorem1_constants(p, 0.2, 2, 2).log_transition_n;
        for (int H = 3; H <= 8; ++H) {
            CHECK(theorem1_constants(p, 0.2, 2, H).log_transition_n <= base * H * H);
        }
    }
}

TEST_CASE("bound parameter validation") {
    CHECK_THROWS_AS(theorem1_constants(0.5, 0.0, 2, 3), DegenerateInstance);
    CHECK_THROWS_AS(theorem1_constants(0.0, 0.5, 2, 3), ConfigError);
    CHECK_THROWS_AS(theorem1_constants(1.5, 0.5, 2, 3), ConfigError);
    CHECK_THROWS_AS(theorem1_constants(0.5, 0.5, 1, 3), ConfigError);
    CHECK_THROWS_AS(theorem1_constants(0.5, 0.5, 2, 0), ConfigError);
    CHECK_THROWS_AS(lemma1_constants(0.5, -0.1, 2, 3), ConfigError);
}

TEST_CASE("flat-policy bounds") {
    // Below one Naive sweep of K^(B^H) = 16 arms the exponent vanishes.
    const FlatBounds low = naive_crafty_bounds(2, 2, 2, 0.2, 15);
    CHECK(low.naive == doctest::Approx(2.0 * 16));
    CHECK(low.naive_choice == doctest::Approx(16.0));
    const FlatBounds f = naive_crafty_bounds(2, 2, 2, 0.2, 8192);
    CHECK(f.naive == doctest::Approx(2 * 16 * std::exp(-512 * 0.04 / 8)).epsilon(1e-12));
    CHECK(f.crafty == doctest::Approx(4 * 2 * 16 * std::exp(-8192 * 0.04 / (4 * 16 * 4.0))).epsilon(1e-12));
    CHECK(f.crafty_transition == doctest::Approx(64 * 4 * 100 * std::log(2.0)).epsilon(1e-12));
    CHECK(f.crafty_transition == doctest::Approx(17744.5678223346).epsilon(1e-12));
    double prev = INFINITY;
    for (std::uint64_t n = 1; n < 100000; n *= 3) {
        const FlatBounds g = naive_crafty_bounds(2, 2, 3, 0.1, n);
        CHECK(g.crafty < prev);
        prev = g.crafty;
        CHECK(g.log_crafty == doctest::Approx(std::log(g.crafty)));
    }
    CHECK_THROWS_AS(naive_crafty_bounds(2, 2, 2, 0.0, 10), ConfigError);
}

TEST_CASE("concentration bounds") {
    CHECK(azuma_bound(1, 0.25, 0, 1, 100) == doctest::Approx(std::exp(-3 * 0.0625 * 100 / 2)));
    CHECK(azuma_bound(2, 0.5, 1, 0.1, 50) ==
          doctest::Approx((1 + 8 / (0.25 * 0.01)) * std::exp(-3 * 0.25 * 0.1 * 50 / 8)));
    CHECK(azuma_window_bound(2, 0.5, 1, 0.1, 50, 1.0) == azuma_bound(2, 0.5, 1, 0.1, 50));
    CHECK(azuma_window_bound(1, 0.25, 1, 1, 100, 0.5) ==
          doctest::Approx((1 + 1 / 0.5 * std::exp(-0.25 * 100)) * std::exp(-3 * 0.0625 * 0.5 * 100 / 2)));
    CHECK(azuma_bound_beta(1, 0.25, 0, 1, 100, 0.5) == doctest::Approx(std::exp(-3 * 0.0625 * 0.5 * 100 / 2)));
    CHECK_THROWS_AS(azuma_bound(1, 0.6, 0, 1, 10), ConfigError);
    CHECK_THROWS_AS(azuma_bound(1, 0.25, 0, 1.5, 10), ConfigError);
    CHECK_THROWS_AS(azuma_bound_beta(1, 0.25, 0, 1, 10, 1.0), ConfigError);
    CHECK_THROWS_AS(azuma_window_bound(1, 0.25, 0, 1, 10, 0.0), ConfigError);
}

TEST_CASE("azuma_check") {
    SUBCASE("no contamination") {
        AzumaScenario s;
        s.c_p = 0;
        const auto rows = azuma_check({s}, {10, 50, 100}, 100000, 3);
        REQUIRE(rows.size() == 3);
        for (const AzumaRow& r : rows) {
            CHECK(r.bound == doctest::Approx(std::exp(-3 * 0.0625 * r.t / 2.0)));
            CHECK(r.empirical <= r.bound);
            CHECK_FALSE(r.violation);
            CHECK(r.trials == 100000);
            CHECK(r.ci_lower <= r.empirical);
            CHECK(r.ci_upper >= r.empirical);
        }
    }
    SUBCASE("full window reproduces the plain sum on the same stream") {
        AzumaScenario full;
        full.c_p = 1;
        AzumaScenario half = full;
        half.alpha = 0.5;
        const auto alone = azuma_check({full}, {10, 50}, 20000, 4);
        const auto both = azuma_check({half, full}, {10, 50}, 20000, 4);
        CHECK(alone[0].hits == both[2].hits);
        CHECK(alone[1].hits == both[3].hits);
        CHECK(alone[0].bound == azuma_bound(1, 0.25, 1, 1, 10));
    }
    SUBCASE("validation") {
        AzumaScenario bad;
        bad.delta = 0.75;
        CHECK_THROWS_AS(azuma_check({bad}, {10}, 100, 1), ConfigError);
        bad = AzumaScenario{};
        bad.c_e = 2;
        CHECK_THROWS_AS(azuma_check({bad}, {10}, 100, 1), ConfigError);
        bad = AzumaScenario{};
        bad.mu = 1.5;
        CHECK_THROWS_AS(azuma_check({bad}, {10}, 100, 1), ConfigError);
    }
    SUBCASE("parallel runs match serial ones") {
        const auto grid = default_azuma_grid();
        CHECK(grid.size() == 48);
        const std::vector<AzumaScenario> some(grid.begin(), grid.begin() + 6);
        const auto a = azuma_check(some, {10, 50}, 3000, 9, 1);
        const auto b = azuma_check(some, {10, 50}, 3000, 9, 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].hits == b[i].hits);
        }
    }
}

TEST_CASE("statistics helpers") {
    const Interval none = clopper_pearson(0, 100, 0.01);
    CHECK(none.lower == 0.0);
    CHECK(none.upper == doctest::Approx(1 - std::pow(0.01, 0.01)).epsilon(1e-10));
    const Interval all = clopper_pearson(100, 100, 0.01);
    CHECK(all.upper == 1.0);
    CHECK(all.lower == doctest::Approx(std::pow(0.01, 0.01)).epsilon(1e-10));
    const Interval mid = clopper_pearson(50, 100, 0.05);
    CHECK(mid.lower < 0.5);
    CHECK(mid.upper > 0.5);
    CHECK(mid.lower == doctest::Approx(1 - mid.upper).epsilon(1e-10));

    const std::vector<double> xs = {1, 2, 3, 4};
    const MeanSummary m = summarize(xs);
    CHECK(m.mean == 2.5);
    CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

    const std::vector<double> x = {0.1, 0.2, 0.15, 0.12, 0.18, 0.11};
    const std::vector<double> y = {0.3, 0.35, 0.33, 0.31, 0.36, 0.29};
    const PairedComparison c = paired_compare(x, y);
    CHECK(c.mean_diff < 0);
    CHECK(c.p_less < 0.001);
    CHECK(c.upper < 0);
    const PairedComparison same = paired_compare(x, x);
    CHECK(same.mean_diff == 0.0);
    CHECK(same.upper == 0.0);
    CHECK(same.p_less == 1.0);

    const std::vector<double> ts = {1, 2, 3};
    const std::vector<double> line = {5, 3, 1};
    CHECK(ols_slope(ts, line) == doctest::Approx(-2.0));
}
