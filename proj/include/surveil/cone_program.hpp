#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surveil/sinr.hpp"

namespace surveil {

/// row * x <= rhs
struct LinearIneq {
    Eigen::RowVectorXd row;
    double rhs = 0.0;
    std::string group;
};

/// ||a x + b||_2 <= c x + d
struct SocBlock {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::RowVectorXd c;
    double d = 0.0;
    std::string group;
};

/// Linear-objective second-order cone program: maximize objective' x subject to
/// linear inequalities and SOC blocks. Solver independent.
struct ConeProgram {
    Eigen::Index n_vars = 0;
    Eigen::VectorXd objective;
    std::vector<LinearIneq> linear_ineqs;
    std::vector<SocBlock> soc_blocks;
    std::vector<std::string> var_names;

    /// Throws std::invalid_argument on inconsistent dimensions or empty SOC blocks.
    void validate() const;
    /// Number of distinct constraint group labels.
    std::size_t group_count() const;
};

struct ConstraintCheck {
    double max_violation = 0.0;             // max over constraints of (lhs - rhs)+
    double max_scaled_violation = 0.0;      // same, each constraint divided by its row scale
    std::string worst_group;                // group of the largest scaled violation
    std::size_t worst_index = 0;            // index within linear_ineqs, then soc_blocks
};

/// Max over all constraints of (lhs - rhs)+; zero iff x is feasible.
double evaluate_constraints(const ConeProgram& cp, const Eigen::VectorXd& x);
ConstraintCheck check_constraints(const ConeProgram& cp, const Eigen::VectorXd& x);

/// Fixed layout of the real variables: [Re v_1..Re v_N, Im v_1..Im v_N, a, b, c, d, e].
struct SubproblemLayout {
    Eigen::Index n_r;

    Eigen::Index size() const { return 2 * n_r + 5; }
    Eigen::Index re(Eigen::Index n) const { return n; }
    Eigen::Index im(Eigen::Index n) const { return n_r + n; }
    Eigen::Index a() const { return 2 * n_r; }
    Eigen::Index b() const { return 2 * n_r + 1; }
    Eigen::Index c() const { return 2 * n_r + 2; }
    Eigen::Index d() const { return 2 * n_r + 3; }
    Eigen::Index e() const { return 2 * n_r + 4; }

    CVector elements(const Eigen::VectorXd& x) const;
};

/// Expansion point of the first-order bounds: v0 with the true Bob/Eve
/// denominators evaluated there.
struct LinearizationPoint {
    ReflectVector v0;
    double b0;
    double e0;
};

LinearizationPoint make_linearization_point(const ReflectVector& v0,
                                            const AugmentedChannels& aug,
                                            const PowerBudget& pb);

/// Convex inner approximation of the rate problem around `lp`. Groups:
/// C1 (element budgets), C4' and C8 (linearized signal bounds), C5' and C9
/// (denominator cones), C10' (hyperbolic cone) and C11' (linearized Bob
/// denominator).
ConeProgram build_subproblem(const AugmentedChannels& aug, const ChannelSet& ch,
                             const PowerBudget& pb, const LinearizationPoint& lp);

/// The point x(v0) with a = c = SINR_B(v0), b = d = b0, e = e0.
Eigen::VectorXd taylor_point(const AugmentedChannels& aug, const PowerBudget& pb,
                             const LinearizationPoint& lp);

}  // namespace surveil
