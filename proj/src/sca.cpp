#include "surveil/sca.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace surveil {

void ScaOptions::validate() const {
    if (max_rounds < 1) throw std::invalid_argument("ScaOptions: max_rounds must be >= 1");
    if (!(obj_tol > 0.0)) throw std::invalid_argument("ScaOptions: obj_tol must be positive");
    solver.validate();
}

const char* to_string(ScaOutcome o) {
    switch (o) {
        case ScaOutcome::Converged: return "converged";
        case ScaOutcome::RoundLimit: return "round-limit";
        case ScaOutcome::FallbackNoReflection: return "fallback-no-reflection";
        case ScaOutcome::StoppedOnFailure: return "stopped-on-failure";
    }
    return "unknown";
}

LinearizationPoint update_point(const ReflectVector& v, const AugmentedChannels& aug,
                                const PowerBudget& pb) {
    return make_linearization_point(v, aug, pb);
}

ScaResult sca_solve(const ChannelSet& ch, const AugmentedChannels& aug, const PowerBudget& pb,
                    const ScaOptions& opts) {
    opts.validate();
    pb.validate_active();
    const Eigen::Index n_r = aug.n_r();
    const SubproblemLayout layout{n_r};

    ScaResult res{ReflectVector(n_r), {}};
    LinearizationPoint lp = update_point(ReflectVector::filled(n_r, opts.init_value), aug, pb);
    double previous = -std::numeric_limits<double>::infinity();

    for (int r = 1; r <= opts.max_rounds; ++r) {
        const ConeProgram cp = build_subproblem(aug, ch, pb, lp);
        const ConeSolution sol = solve(cp, opts.solver);
        if (sol.status != SolveStatus::Optimal) {
            res.trace.rounds.push_back({r, sol.objective_value, 0.0, 0.0, sol.status,
                                        check_constraints(cp, sol.x).max_scaled_violation});
            if (r == 1) {
                res.v = ReflectVector(n_r);
                res.trace.outcome = ScaOutcome::FallbackNoReflection;
                res.trace.diagnostic = std::string("first subproblem ") + to_string(sol.status) +
                                       "; using the direct links only";
            } else {
                res.trace.outcome = ScaOutcome::StoppedOnFailure;
                res.trace.diagnostic = std::string("round ") + std::to_string(r) + " " +
                                       to_string(sol.status) + "; keeping round " +
                                       std::to_string(r - 1);
            }
            return res;
        }
        const ReflectVector v = ReflectVector::from_elements(layout.elements(sol.x));
        const double a = sol.x[layout.a()];
        res.trace.rounds.push_back({r, a, sinr_bob(v, aug, pb), sinr_eve(v, aug, pb), sol.status,
                                    check_constraints(cp, sol.x).max_scaled_violation});
        res.v = v;
        if (r > 1 && a - previous <= opts.obj_tol * std::max(1.0, std::abs(previous))) {
            res.trace.outcome = ScaOutcome::Converged;
            return res;
        }
        previous = a;
        lp = update_point(v, aug, pb);
    }
    res.trace.outcome = ScaOutcome::RoundLimit;
    return res;
}

void write_trace_csv(std::ostream& os, const ScaTrace& trace, bool header) {
    if (header) os << "round,objective,sinr_b,sinr_e,status\n";
    const auto saved = os.precision(12);
    for (const ScaRound& r : trace.rounds) {
        os << r.round << ',' << r.objective << ',' << r.sinr_b << ',' << r.sinr_e << ','
           << to_string(r.status) << '\n';
    }
    os.precision(saved);
}

}  // namespace surveil
