#pragma once

#include <string>

#include "surveil/cone_program.hpp"

namespace surveil {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterLimit, NumericalFailure };

const char* to_string(SolveStatus s);

struct SolverOptions {
    double tol = 1e-8;
    int max_iters = 200;

    void validate() const;
};

struct ConeSolution {
    Eigen::VectorXd x;
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective_value = 0.0;  // objective' x of the original (maximization) program
    double kkt_residual = 0.0;
    int iterations = 0;
    /// Dual multipliers in constraint order (linear rows, then each SOC block
    /// as [t; u]); empty unless the solver reached a primal-dual point.
    Eigen::VectorXd duals;
    /// Dual objective of the original program (upper bound on the optimum).
    double dual_objective = 0.0;
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding
/// with Nesterov-Todd scaling and a Mehrotra predictor-corrector. Rows are
/// equilibrated before solving; tolerances apply to the equilibrated problem.
ConeSolution solve(const ConeProgram& cp, const SolverOptions& opts = {});

struct CertifyReport {
    double max_violation = 0.0;         // raw (lhs - rhs)+
    double max_scaled_violation = 0.0;  // per-constraint row-normalized
    std::string worst_group;
    std::size_t worst_index = 0;
    bool has_duals = false;
    double duality_gap = 0.0;           // |dual objective - primal objective|, when duals exist
    double dual_residual = 0.0;         // ||G' z + c|| of the equilibrated program
    bool feasible_within(double tol) const { return max_scaled_violation <= tol; }
};

/// Recomputes feasibility (and the duality gap when duals are present) for a solution.
CertifyReport certify(const ConeProgram& cp, const ConeSolution& sol);

}  // namespace surveil
