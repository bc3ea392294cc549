#pragma once

#include "surveil/element_geometry.hpp"

namespace surveil {

/// Budget with the surface noise removed; passive elements inject none.
PowerBudget passive_budget(const PowerBudget& pb);

/// Unit-modulus maximizer of the single-element objective. Candidates are the
/// unit-circle point farthest from the objective center and the crossings of
/// the circle with the eavesdropping-constraint boundary. When no point of the
/// circle satisfies the constraint, the phase that maximizes the constraint
/// margin is returned with region_nonempty = false.
CaseOutcome solve_unit_modulus(const ElementCoefficients& ec);

/// Phase-only coordinate ascent for a passive surface, starting from zero phases.
ReflectVector passive_optimize(const ChannelSet& ch, const PowerBudget& pb, int rounds = 3);

/// Rate of a unit-modulus vector evaluated with sigma_r2 = 0. Throws
/// std::domain_error if any |phi_n| differs from 1 by more than 1e-9.
SinrReport passive_rate(const ReflectVector& v, const ChannelSet& ch, const PowerBudget& pb,
                        double c3_tol = 0.0);

}  // namespace surveil
