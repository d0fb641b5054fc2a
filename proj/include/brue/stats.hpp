#pragma once

#include <cstdint>
#include <span>

namespace brue {

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
};

/// One-sided Clopper-Pearson limits, each at level 1 - alpha.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha);

struct MeanSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

MeanSummary summarize(std::span<const double> xs);

/// Paired comparison of x against y on the differences x_i - y_i.
struct PairedComparison {
    std::size_t n = 0;
    double mean_diff = 0.0;
    double std_error = 0.0;
    /// One-sided p-value for H1: mean(x - y) < 0.
    double p_less = 1.0;
    /// Upper one-sided (1 - alpha) confidence limit of mean(x - y).
    double upper = 0.0;
};

/// Student-t based; when all differences are equal the limits collapse to the mean.
PairedComparison paired_compare(std::span<const double> x, std::span<const double> y,
                                double alpha = 0.05);

/// Least-squares slope of ys against xs.
double ols_slope(std::span<const double> xs, std::span<const double> ys);

} // namespace brue
