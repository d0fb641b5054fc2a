#include "brue/regret.hpp"

#include <algorithm>

namespace brue {

double simple_regret(const OracleTable& oracle, StateId s, int h, ActionId a) {
    const double v = oracle.value(s, h);
    const double q = oracle.q(s, h, a);
    const double gap = oracle.minimizing(s, h) ? q - v : v - q;
    // V is an exact max over the same Q entries, so gap is never below zero.
    return std::max(gap, 0.0);
}

} // namespace brue
