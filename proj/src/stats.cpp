#include "brue/stats.hpp"

#include <cmath>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "brue/errors.hpp"

namespace brue {

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha) {
    using boost::math::binomial_distribution;
    if (trials == 0 || successes > trials) {
        throw ConfigError("confidence interval needs 0 <= successes <= trials, trials > 0");
    }
    const auto n = static_cast<double>(trials);
    const auto k = static_cast<double>(successes);
    return {binomial_distribution<>::find_lower_bound_on_p(n, k, alpha),
            binomial_distribution<>::find_upper_bound_on_p(n, k, alpha)};
}

MeanSummary summarize(std::span<const double> xs) {
    MeanSummary s;
    s.n = xs.size();
    if (xs.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - s.mean) * (x - s.mean);
        }
        s.std_error = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
    }
    return s;
}

PairedComparison paired_compare(std::span<const double> x, std::span<const double> y, double alpha) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ConfigError("paired comparison needs two samples of equal size >= 2");
    }
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        diff[i] = x[i] - y[i];
    }
    const MeanSummary s = summarize(diff);
    PairedComparison r;
    r.n = s.n;
    r.mean_diff = s.mean;
    r.std_error = s.std_error;
    if (s.std_error == 0.0) {
        r.p_less = s.mean < 0.0 ? 0.0 : 1.0;
        r.upper = s.mean;
        return r;
    }
    const boost::math::students_t dist(static_cast<double>(s.n - 1));
    const double t = s.mean / s.std_error;
    r.p_less = boost::math::cdf(dist, t);
    r.upper = s.mean + boost::math::quantile(dist, 1.0 - alpha) * s.std_error;
    return r;
}

double ols_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ConfigError("slope needs two equal-length series of size >= 2");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

} // namespace brue
