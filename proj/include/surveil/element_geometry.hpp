#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surveil/sinr.hpp"

namespace surveil {

/// Contributions of every element except n, for the single-element view of
/// the SINRs. The complex residuals are kept; their squared magnitude is what
/// enters the constant terms.
struct PartialChannels {
    cplx h_ab_not_n;    // h_ab + sum_{j != n} h_ar[j] h_rb[j] phi_j
    double h_rb_not_n;  // sum_{j != n} |h_rb[j] phi_j|^2
    cplx h_ae_not_n;
    double h_re_not_n;
};

PartialChannels partial_channels(Eigen::Index n, const ReflectVector& v, const ChannelSet& ch);

/// Coefficients of the worst-case single-element surrogates
///   bob(phi) = j |phi|^2 + k + l Re(phi) + m Im(phi)   (no noise from element n)
///   eve(phi) = n |phi|^2 + o + p Re(phi) + q Im(phi)   (element n at full budget)
/// plus the ring geometry derived from them.
struct ElementCoefficients {
    double j = 0, k = 0, l = 0, m = 0, n = 0, o = 0, p = 0, q = 0;
    double beta_up = 0;  // squared-amplitude budget of the element
    double s = 0, t = 0; // objective ring center (-l/2j, -m/2j); NaN when j == 0
    double u = 0, w = 0; // constraint ring center; NaN when n == j
    double z = 0;        // constraint ring squared radius; NaN when n == j
    double d1 = 0;       // |(u, w)|

    /// Fills s, t, u, w, z, d1 from the eight coefficients.
    void derive();
    double bob(cplx phi) const { return j * std::norm(phi) + k + l * phi.real() + m * phi.imag(); }
    double eve(cplx phi) const { return n * std::norm(phi) + o + p * phi.real() + q * phi.imag(); }
    /// eve(phi) - bob(phi); the surrogate eavesdropping condition is margin >= 0.
    double c3_margin(cplx phi) const { return eve(phi) - bob(phi); }
};

constexpr double kDegenerateNj = 1e-12;  // |n - j| below this: half-plane constraint
constexpr double kLinearJ = 1e-15;       // j below this: linear objective

ElementCoefficients element_coefficients(Eigen::Index n, const PartialChannels& pc,
                                         const ChannelSet& ch, const PowerBudget& pb);

enum class ElementCase {
    NjPosZNonPos,    // constraint holds everywhere
    NjPosEnclosed,   // budget disk inside the excluded disk: empty
    NjPosHoleInside, // excluded disk strictly inside the budget disk
    NjPosDisjoint,
    NjPosOverlap,
    NjNegZNonPos,    // empty
    NjNegInside,     // budget disk inside the allowed disk
    NjNegContained,  // allowed disk inside the budget disk
    NjNegDisjoint,   // empty
    NjNegOverlap,
    NjZeroHalfPlane,
};

constexpr int kElementCaseCount = 11;

const char* to_string(ElementCase c);

struct Candidate {
    std::string name;  // gamma, eta, eps1, eps2, origin, chord1, chord2
    cplx point;
    bool feasible = false;
    double objective = 0.0;
};

struct CaseOutcome {
    ElementCase case_id = ElementCase::NjPosZNonPos;
    bool linear_objective = false;  // j below kLinearJ
    bool region_nonempty = true;
    cplx phi;
    std::vector<Candidate> candidates;
};

/// Farthest point from (s, t) on the budget circle (towards (l, m) when the
/// objective is linear). Ties pick the +real direction.
cplx candidate_gamma(const ElementCoefficients& ec);
/// Farthest point from (s, t) on the constraint circle; absent when z <= 0.
std::optional<cplx> candidate_eta(const ElementCoefficients& ec);
/// Intersections of the budget circle with the constraint circle.
std::optional<std::pair<cplx, cplx>> circle_intersections(const ElementCoefficients& ec);
/// Intersections of a circle (center c, radius r) with another (center c2, radius r2).
std::optional<std::pair<cplx, cplx>> intersect_circles(cplx c1, double r1, cplx c2, double r2);
/// Intersections of the line a x + b y = rhs with the circle |phi| = r.
std::optional<std::pair<cplx, cplx>> intersect_line_circle(double a, double b, double rhs,
                                                           double r);

/// Closed-form maximizer of the surrogate objective over the budget disk
/// intersected with the surrogate eavesdropping region.
CaseOutcome solve_surrogate(const ElementCoefficients& ec);

CaseOutcome solve_element(Eigen::Index n, const ReflectVector& v, const ChannelSet& ch,
                          const PowerBudget& pb);

struct CoordinateDescentResult {
    ReflectVector v;
    std::vector<ElementCase> cases;  // every element solve, in order
    int nonzero_updates = 0;
};

/// Called after each element update with the element index, its outcome and the full vector.
using ElementObserver = std::function<void(Eigen::Index, const CaseOutcome&, const ReflectVector&)>;

/// Sweeps the elements `rounds` times, replacing each coefficient by the
/// surrogate maximizer given the others.
CoordinateDescentResult coordinate_descent(const ChannelSet& ch, const PowerBudget& pb,
                                           int rounds = 3, cplx init = {0.01, 0.0},
                                           const ElementObserver& observer = {});

}  // namespace surveil
