#include "brue/azuma.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "brue/bounds.hpp"
#include "brue/errors.hpp"
#include "brue/format.hpp"
#include "brue/parallel.hpp"
#include "brue/rng.hpp"
#include "brue/stats.hpp"

namespace brue {

void AzumaScenario::validate() const {
    if (!(h > 0.0)) {
        throw ConfigError("azuma: h must be positive");
    }
    const double m = mean();
    if (!(m >= 0.0 && m <= h)) {
        throw ConfigError("azuma: mu must lie in [0, h]");
    }
    if (!(delta > 0.0 && delta <= h / 2)) {
        throw ConfigError("azuma: delta must lie in (0, h/2], got " + format_real(delta));
    }
    if (!(c_p >= 0.0)) {
        throw ConfigError("azuma: c_p must be nonnegative");
    }
    if (!(c_e > 0.0 && c_e <= 1.0)) {
        throw ConfigError("azuma: c_e must lie in (0, 1]");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ConfigError("azuma: alpha must lie in (0, 1]");
    }
    if (beta && alpha != 1.0) {
        throw ConfigError("azuma: the beta bound family applies to full sums only");
    }
    if (beta && !(*beta >= 0.0 && *beta < 1.0)) {
        throw ConfigError("azuma: beta must lie in [0, 1)");
    }
}

double AzumaScenario::bound(double t) const {
    if (beta) {
        return azuma_bound_beta(h, delta, c_p, c_e, t, *beta);
    }
    return azuma_window_bound(h, delta, c_p, c_e, t, alpha);
}

namespace {

using GeneratorKey = std::tuple<double, double, double, double>;

constexpr std::uint64_t kAzumaTag = 0x617a756d61ull;
constexpr std::size_t kChunks = 64;

std::uint64_t window_of(double alpha, std::uint64_t t) {
    const auto w = static_cast<std::uint64_t>(std::ceil(alpha * static_cast<double>(t)));
    return std::clamp<std::uint64_t>(w, 1, t);
}

} // namespace

std::vector<AzumaRow> azuma_check(const std::vector<AzumaScenario>& scenarios,
                                  const std::vector<std::uint64_t>& t_grid, std::uint64_t trials,
                                  std::uint64_t seed, unsigned jobs) {
    if (trials == 0) {
        throw ConfigError("azuma: trials must be positive");
    }
    if (t_grid.empty() || std::any_of(t_grid.begin(), t_grid.end(), [](auto t) { return t == 0; })) {
        throw ConfigError("azuma: t grid must be nonempty with positive entries");
    }
    for (const auto& s : scenarios) {
        s.validate();
    }
    const std::uint64_t t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const std::size_t nt = t_grid.size();

    std::map<GeneratorKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        groups[{s.h, s.mean(), s.c_p, s.c_e}].push_back(i);
    }

    std::vector<std::uint64_t> hits(scenarios.size() * nt, 0);
    for (const auto& [key, members] : groups) {
        const auto [h, mu, c_p, c_e] = key;
        const double w0 = std::min(mu, h - mu);
        std::vector<double> contamination(t_max + 1);
        for (std::uint64_t i = 1; i <= t_max; ++i) {
            contamination[i] = std::min(1.0, c_p * std::exp(-c_e * static_cast<double>(i)));
        }
        const std::uint64_t stream_base =
            derive_stream_id({kAzumaTag, std::bit_cast<std::uint64_t>(h), std::bit_cast<std::uint64_t>(mu),
                              std::bit_cast<std::uint64_t>(c_p), std::bit_cast<std::uint64_t>(c_e)});

        // Thresholds and windows per (member, t).
        struct Check {
            std::size_t slot;
            std::uint64_t t;
            std::uint64_t w;
            double threshold;
        };
        std::vector<Check> checks;
        for (std::size_t m : members) {
            const auto& s = scenarios[m];
            for (std::size_t j = 0; j < nt; ++j) {
                const std::uint64_t t = t_grid[j];
                const std::uint64_t w = window_of(s.alpha, t);
                const double threshold = w == t ? mu * static_cast<double>(t) + static_cast<double>(t) * s.delta
                                                : (mu + s.delta) * static_cast<double>(w);
                checks.push_back({m * nt + j, t, w, threshold});
            }
        }

        const std::size_t chunks = std::min<std::uint64_t>(kChunks, trials);
        std::vector<std::vector<std::uint64_t>> chunk_hits(chunks, std::vector<std::uint64_t>(checks.size(), 0));
        parallel_for(chunks, jobs, [&](std::size_t c) {
            const std::uint64_t begin = trials * c / chunks;
            const std::uint64_t end = trials * (c + 1) / chunks;
            std::vector<double> prefix(t_max + 1, 0.0);
            auto& local = chunk_hits[c];
            for (std::uint64_t trial = begin; trial < end; ++trial) {
                RngStream rng(seed, mix64(stream_base ^ mix64(trial)));
                for (std::uint64_t i = 1; i <= t_max; ++i) {
                    const bool contaminated = rng.uniform() < contamination[i];
                    const double u = rng.uniform();
                    const double x = contaminated ? mu + (h - mu) * u : mu - w0 + 2 * w0 * u;
                    prefix[i] = prefix[i - 1] + x;
                }
                for (std::size_t k = 0; k < checks.size(); ++k) {
                    const Check& ch = checks[k];
                    const double sum = prefix[ch.t] - prefix[ch.t - ch.w];
                    if (sum >= ch.threshold) {
                        ++local[k];
                    }
                }
            }
        });
        for (std::size_t k = 0; k < checks.size(); ++k) {
            for (std::size_t c = 0; c < chunks; ++c) {
                hits[checks[k].slot] += chunk_hits[c][k];
            }
        }
    }

    std::vector<AzumaRow> rows;
    rows.reserve(hits.size());
    for (std::size_t m = 0; m < scenarios.size(); ++m) {
        for (std::size_t j = 0; j < nt; ++j) {
            AzumaRow r;
            r.scenario = scenarios[m];
            r.t = t_grid[j];
            r.hits = hits[m * nt + j];
            r.trials = trials;
            r.empirical = static_cast<double>(r.hits) / static_cast<double>(trials);
            const Interval ci = clopper_pearson(r.hits, trials, 0.01);
            r.ci_lower = ci.lower;
            r.ci_upper = ci.upper;
            r.bound = scenarios[m].bound(static_cast<double>(r.t));
            r.violation = r.ci_lower > r.bound;
            r.resolution_limited = !r.violation && r.ci_upper > r.bound;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<AzumaScenario> default_azuma_grid() {
    std::vector<AzumaScenario> grid;
    for (double h : {1.0, 2.0}) {
        for (double delta_frac : {0.25, 0.5}) {
            for (double c_e : {0.1, 1.0}) {
                for (double c_p : {0.0, 1.0, 10.0}) {
                    for (double alpha : {0.5, 1.0}) {
                        AzumaScenario s;
                        s.h = h;
                        s.delta = h * delta_frac;
                        s.c_e = c_e;
                        s.c_p = c_p;
                        s.alpha = alpha;
                        grid.push_back(s);
                    }
                }
            }
        }
    }
    return grid;
}

std::vector<std::uint64_t> default_azuma_t_grid() { return {10, 50, 100, 500}; }

void write_azuma_csv(std::ostream& out, const std::vector<AzumaRow>& rows) {
    out << "t,empirical_tail,ci_lower,ci_upper,analytic_bound,violation,resolution_limited,"
           "h,mu,delta,c_p,c_e,alpha,beta,hits,trials\n";
    for (const AzumaRow& r : rows) {
        const auto& s = r.scenario;
        out << r.t << ',' << format_real(r.empirical) << ',' << format_real(r.ci_lower) << ','
            << format_real(r.ci_upper) << ',' << format_real(r.bound) << ',' << (r.violation ? 1 : 0)
            << ',' << (r.resolution_limited ? 1 : 0) << ',' << format_real(s.h) << ','
            << format_real(s.mean()) << ',' << format_real(s.delta) << ',' << format_real(s.c_p) << ','
            << format_real(s.c_e) << ',' << format_real(s.alpha) << ','
            << (s.beta ? format_real(*s.beta) : std::string()) << ',' << r.hits << ',' << r.trials
            << '\n';
    }
}

} // namespace brue
