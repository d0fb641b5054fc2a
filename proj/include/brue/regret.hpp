#pragma once

#include "brue/mdp.hpp"
#include "brue/oracle.hpp"

namespace brue {

/// SR_h(s, a) = Q_h(s, pi*) - Q_h(s, a), oriented for the player to move so it
/// is never negative. Throws MissingOracleEntry if (s, h) is not covered.
double simple_regret(const OracleTable& oracle, StateId s, int h, ActionId a);

} // namespace brue
