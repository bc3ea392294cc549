#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "surveil/cone_solver.hpp"

namespace surveil {

struct ScaOptions {
    int max_rounds = 20;
    double obj_tol = 1e-4;            // relative plateau on the auxiliary objective
    cplx init_value{0.01, 0.0};       // every element of the first expansion point
    SolverOptions solver{};

    void validate() const;
};

struct ScaRound {
    int round = 0;
    double objective = 0.0;  // auxiliary a of the convex subproblem
    double sinr_b = 0.0;     // true SINRs at the round's iterate
    double sinr_e = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    double violation = 0.0;  // scaled constraint violation of the subproblem solution
};

enum class ScaOutcome { Converged, RoundLimit, FallbackNoReflection, StoppedOnFailure };

const char* to_string(ScaOutcome o);

struct ScaTrace {
    std::vector<ScaRound> rounds;
    ScaOutcome outcome = ScaOutcome::RoundLimit;
    std::string diagnostic;
};

struct ScaResult {
    ReflectVector v;
    ScaTrace trace;
};

/// Refreshes the expansion point: v0 := v, (b0, e0) := true denominators at v.
LinearizationPoint update_point(const ReflectVector& v, const AugmentedChannels& aug,
                                const PowerBudget& pb);

/// Successive convex approximation of the rate problem. Each round solves the
/// inner approximation around the previous iterate, so every returned iterate
/// is feasible for the original problem and the objective never decreases.
/// An infeasible first round yields the no-reflection vector.
ScaResult sca_solve(const ChannelSet& ch, const AugmentedChannels& aug, const PowerBudget& pb,
                    const ScaOptions& opts = {});

/// CSV rows "round,objective,sinr_b,sinr_e,status"; header optional.
void write_trace_csv(std::ostream& os, const ScaTrace& trace, bool header = true);

}  // namespace surveil
