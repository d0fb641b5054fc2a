#include "brue/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brue/errors.hpp"
#include "brue/format.hpp"
#include "brue/rng.hpp"

namespace brue {

TabularMdp::TabularMdp(TabularModel model) : model_(std::move(model)) {
    const std::size_t n = model_.transitions.size();
    if (n == 0 || model_.start.value >= n) {
        throw ConfigError("tabular: start state out of range");
    }
    if (model_.horizon < 0) {
        throw ConfigError("tabular: negative horizon");
    }
    if (!model_.minimizing.empty() && model_.minimizing.size() != n) {
        throw ConfigError("tabular: minimizing flags must cover every state");
    }
    range_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& actions : model_.transitions) {
        for (const auto& outcomes : actions) {
            if (outcomes.empty()) {
                throw ConfigError("tabular: action without outcomes");
            }
            double total = 0.0;
            for (const Outcome& o : outcomes) {
                if (!(o.probability > 0.0) || o.next.value >= n) {
                    throw ConfigError("tabular: outcome with bad probability or successor");
                }
                total += o.probability;
                range_.min = std::min(range_.min, o.reward);
                range_.max = std::max(range_.max, o.reward);
            }
            if (std::abs(total - 1.0) > 1e-12) {
                throw ConfigError("tabular: outcome probabilities must sum to 1");
            }
        }
    }
    if (range_.min > range_.max) {
        range_ = {0.0, 0.0};
    }
}

std::size_t TabularMdp::num_actions(StateId s) const {
    return model_.transitions.at(s.value).size();
}

Transition TabularMdp::sample_transition(StateId s, ActionId a, RngStream& rng) const {
    const auto& outcomes = model_.transitions.at(s.value).at(a);
    const double u = rng.uniform();
    double acc = 0.0;
    for (const Outcome& o : outcomes) {
        acc += o.probability;
        if (u < acc) {
            return {o.next, o.reward};
        }
    }
    return {outcomes.back().next, outcomes.back().reward};
}

std::vector<Outcome> TabularMdp::enumerate_outcomes(StateId s, ActionId a) const {
    return model_.transitions.at(s.value).at(a);
}

bool TabularMdp::minimizes(StateId s) const {
    return !model_.minimizing.empty() && model_.minimizing.at(s.value);
}

std::string TabularMdp::config_text() const {
    std::ostringstream out;
    out << "domain=" << model_.label << '\n'
        << "horizon=" << model_.horizon << '\n'
        << "start=" << model_.start.value << '\n';
    for (std::size_t s = 0; s < model_.transitions.size(); ++s) {
        for (std::size_t a = 0; a < model_.transitions[s].size(); ++a) {
            out << s << ':' << a;
            for (const Outcome& o : model_.transitions[s][a]) {
                out << ' ' << o.next.value << '/' << format_real(o.probability) << '/'
                    << format_real(o.reward);
            }
            out << '\n';
        }
        if (minimizes(StateId{s})) {
            out << s << ":min\n";
        }
    }
    return out.str();
}

TabularMdp random_tabular_mdp(const RandomMdpSpec& spec, std::uint64_t seed) {
    if (spec.actions < 1 || spec.outcomes < 1 || spec.horizon < 1) {
        throw ConfigError("random mdp: actions, outcomes and horizon must be positive");
    }
    RngStream rng(seed, derive_stream_id({0x7461627531ull}));
    TabularModel model;
    model.horizon = spec.horizon;
    model.label = "random-mdp";
    model.transitions.emplace_back(); // start state

    std::vector<std::uint64_t> layer = {0};
    for (int depth = 0; depth < spec.horizon; ++depth) {
        std::vector<std::uint64_t> next_layer;
        const bool last = depth + 1 == spec.horizon;
        for (std::uint64_t s : layer) {
            std::vector<std::vector<Outcome>> actions;
            for (int a = 0; a < spec.actions; ++a) {
                std::vector<Outcome> outs;
                double total = 0.0;
                for (int b = 0; b < spec.outcomes; ++b) {
                    std::uint64_t target = 0;
                    bool reuse = false;
                    if (!next_layer.empty() && rng.uniform() < spec.merge_prob) {
                        target = next_layer[rng.uniform_index(next_layer.size())];
                        reuse = std::none_of(outs.begin(), outs.end(),
                                             [&](const Outcome& o) { return o.next.value == target; });
                    }
                    if (!reuse) {
                        target = model.transitions.size();
                        model.transitions.emplace_back();
                        if (!last && rng.uniform() >= spec.terminal_prob) {
                            next_layer.push_back(target);
                        }
                    }
                    const double weight = 0.2 + rng.uniform();
                    const double reward =
                        spec.reward_min + (spec.reward_max - spec.reward_min) * rng.uniform();
                    outs.push_back({StateId{target}, weight, reward});
                    total += weight;
                }
                for (Outcome& o : outs) {
                    o.probability /= total;
                }
                // Renormalize so the probabilities sum to one to the last bit we can.
                double sum = 0.0;
                for (std::size_t i = 0; i + 1 < outs.size(); ++i) {
                    sum += outs[i].probability;
                }
                outs.back().probability = 1.0 - sum;
                actions.push_back(std::move(outs));
            }
            model.transitions[s] = std::move(actions);
        }
        // Successors flagged as sinks keep an empty action list.
        layer = std::move(next_layer);
    }
    return TabularMdp(std::move(model));
}

TabularMdp bernoulli_bandit_mdp(const std::vector<double>& success_probs) {
    if (success_probs.empty()) {
        throw ConfigError("bandit: need at least one arm");
    }
    TabularModel model;
    model.horizon = 1;
    model.label = "bernoulli-bandit";
    model.transitions.resize(3); // 0 = decision, 1 = success sink, 2 = failure sink
    for (double p : success_probs) {
        if (!(p > 0.0 && p < 1.0)) {
            throw ConfigError("bandit: success probabilities must lie in (0, 1)");
        }
        model.transitions[0].push_back({Outcome{StateId{1}, p, 1.0}, Outcome{StateId{2}, 1.0 - p, 0.0}});
    }
    return TabularMdp(std::move(model));
}

TabularMdp tiny_benchmark_mdp() {
    // Seed picked so that d >= 0.1 while the root gap stays near 0.056.
    TabularModel model = random_tabular_mdp(RandomMdpSpec{2, 2, 3, 0.0, 0.0, 0.0, 1.0}, 7021).model();
    model.label = "tiny";
    return TabularMdp(std::move(model));
}

} // namespace brue
