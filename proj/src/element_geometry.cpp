#include "surveil/element_geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace surveil {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Relative slack for boundary membership tests of the candidates.
constexpr double kBoundaryTol = 1e-12;

cplx unit_or_real_axis(cplx d) {
    const double r = std::abs(d);
    return r > 0.0 ? d / r : cplx{1.0, 0.0};
}

// Direction in which the objective grows fastest on a circle centered at `center`.
cplx ascent_direction(const ElementCoefficients& ec, cplx center) {
    if (std::isfinite(ec.s) && std::isfinite(ec.t)) {
        return unit_or_real_axis(center - cplx{ec.s, ec.t});
    }
    return unit_or_real_axis({ec.l, ec.m});
}

bool flat_objective(const ElementCoefficients& ec) {
    return ec.j <= kLinearJ && std::hypot(ec.l, ec.m) <= kLinearJ;
}

bool in_budget(const ElementCoefficients& ec, cplx phi) {
    return std::norm(phi) <= ec.beta_up * (1.0 + kBoundaryTol);
}

// Outside (nj > 0) or inside (nj < 0) the constraint circle.
bool in_ring_region(const ElementCoefficients& ec, cplx phi, bool outside) {
    const double d2 = std::norm(phi - cplx{ec.u, ec.w});
    return outside ? d2 >= ec.z * (1.0 - kBoundaryTol) : d2 <= ec.z * (1.0 + kBoundaryTol);
}

Candidate make_candidate(const ElementCoefficients& ec, std::string name, cplx p, bool feasible) {
    return {std::move(name), p, feasible, ec.bob(p)};
}

CaseOutcome half_plane_case(const ElementCoefficients& ec, CaseOutcome out) {
    out.case_id = ElementCase::NjZeroHalfPlane;
    const double a = ec.p - ec.l;
    const double b = ec.q - ec.m;
    const double rhs = ec.k - ec.o;
    const double rb = std::sqrt(ec.beta_up);
    const double scale = std::max({std::abs(a) * rb, std::abs(b) * rb, std::abs(rhs), 1e-300});
    auto feasible = [&](cplx p) {
        return a * p.real() + b * p.imag() >= rhs - kBoundaryTol * scale;
    };
    const cplx gamma = candidate_gamma(ec);
    out.candidates.push_back(make_candidate(ec, "gamma", gamma, feasible(gamma)));
    if (feasible(gamma)) {
        out.phi = gamma;
        return out;
    }
    if (const auto chord = intersect_line_circle(a, b, rhs, rb)) {
        out.candidates.push_back(make_candidate(ec, "chord1", chord->first, true));
        out.candidates.push_back(make_candidate(ec, "chord2", chord->second, true));
        out.phi = ec.bob(chord->first) >= ec.bob(chord->second) ? chord->first : chord->second;
        return out;
    }
    out.region_nonempty = false;
    out.phi = 0.0;
    return out;
}

}  // namespace

const char* to_string(ElementCase c) {
    switch (c) {
        case ElementCase::NjPosZNonPos: return "nj>0,z<=0";
        case ElementCase::NjPosEnclosed: return "nj>0,enclosed";
        case ElementCase::NjPosHoleInside: return "nj>0,hole-inside";
        case ElementCase::NjPosDisjoint: return "nj>0,disjoint";
        case ElementCase::NjPosOverlap: return "nj>0,overlap";
        case ElementCase::NjNegZNonPos: return "nj<0,z<=0";
        case ElementCase::NjNegInside: return "nj<0,inside";
        case ElementCase::NjNegContained: return "nj<0,contained";
        case ElementCase::NjNegDisjoint: return "nj<0,disjoint";
        case ElementCase::NjNegOverlap: return "nj<0,overlap";
        case ElementCase::NjZeroHalfPlane: return "nj=0,half-plane";
    }
    return "unknown";
}

PartialChannels partial_channels(Eigen::Index n, const ReflectVector& v, const ChannelSet& ch) {
    if (n < 0 || n >= ch.n_r() || v.n_r() != ch.n_r()) {
        throw std::out_of_range("partial_channels: element index");
    }
    PartialChannels pc{ch.h_ab, 0.0, ch.h_ae, 0.0};
    for (Eigen::Index i = 0; i < ch.n_r(); ++i) {
        if (i == n) continue;
        const cplx phi = v.phi(i);
        pc.h_ab_not_n += ch.h_ar[i] * ch.h_rb[i] * phi;
        pc.h_ae_not_n += ch.h_ar[i] * ch.h_re[i] * phi;
        pc.h_rb_not_n += std::norm(ch.h_rb[i] * phi);
        pc.h_re_not_n += std::norm(ch.h_re[i] * phi);
    }
    return pc;
}

void ElementCoefficients::derive() {
    if (j > 0.0) {
        s = -l / (2.0 * j);
        t = -m / (2.0 * j);
    } else {
        s = t = kNaN;
    }
    const double nj = n - j;
    if (std::abs(nj) > kDegenerateNj) {
        u = -(p - l) / (2.0 * nj);
        w = -(q - m) / (2.0 * nj);
        z = (k - o) / nj + u * u + w * w;
        d1 = std::hypot(u, w);
    } else {
        u = w = z = d1 = kNaN;
    }
}

ElementCoefficients element_coefficients(Eigen::Index n, const PartialChannels& pc,
                                         const ChannelSet& ch, const PowerBudget& pb) {
    if (n < 0 || n >= ch.n_r()) throw std::out_of_range("element_coefficients: element index");
    ElementCoefficients ec;
    ec.beta_up = pb.amplitude_budget(ch.h_ar[n]);

    const cplx hb = ch.h_ar[n] * ch.h_rb[n];
    const cplx cross_b = hb * std::conj(pc.h_ab_not_n);
    const double den_b = pb.sigma_r2 * pc.h_rb_not_n + pb.sigma_02;
    ec.j = pb.p_a * std::norm(hb) / den_b;
    ec.k = pb.p_a * std::norm(pc.h_ab_not_n) / den_b;
    ec.l = 2.0 * pb.p_a * cross_b.real() / den_b;
    ec.m = -2.0 * pb.p_a * cross_b.imag() / den_b;

    const cplx he = ch.h_ar[n] * ch.h_re[n];
    const cplx cross_e = he * std::conj(pc.h_ae_not_n);
    const double den_e = pb.sigma_r2 * std::norm(ch.h_re[n]) * ec.beta_up +
                         pb.sigma_r2 * pc.h_re_not_n + pb.sigma_02;
    ec.n = pb.p_a * std::norm(he) / den_e;
    ec.o = pb.p_a * std::norm(pc.h_ae_not_n) / den_e;
    ec.p = 2.0 * pb.p_a * cross_e.real() / den_e;
    ec.q = -2.0 * pb.p_a * cross_e.imag() / den_e;
    ec.derive();
    return ec;
}

cplx candidate_gamma(const ElementCoefficients& ec) {
    return std::sqrt(ec.beta_up) * ascent_direction(ec, cplx{0.0, 0.0});
}

std::optional<cplx> candidate_eta(const ElementCoefficients& ec) {
    if (!(ec.z > 0.0)) return std::nullopt;
    const cplx c{ec.u, ec.w};
    return c + std::sqrt(ec.z) * ascent_direction(ec, c);
}

std::optional<std::pair<cplx, cplx>> intersect_circles(cplx c1, double r1, cplx c2, double r2) {
    const cplx delta = c2 - c1;
    const double d = std::abs(delta);
    if (!(d > 0.0) || d > r1 + r2 || d < std::abs(r1 - r2)) return std::nullopt;
    // Distance from c1 to the chord along the center line, then half chord length.
    const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    const double h = std::sqrt(std::max(r1 * r1 - a * a, 0.0));
    const cplx e = delta / d;
    const cplx base = c1 + a * e;
    const cplx perp = e * cplx{0.0, 1.0};
    return std::make_pair(base + h * perp, base - h * perp);
}

std::optional<std::pair<cplx, cplx>> intersect_line_circle(double a, double b, double rhs,
                                                           double r) {
    const double nrm = std::hypot(a, b);
    if (!(nrm > 0.0)) return std::nullopt;
    const double dist = rhs / nrm;  // signed distance of the line from the origin
    if (std::abs(dist) > r) return std::nullopt;
    const cplx e{a / nrm, b / nrm};
    const double h = std::sqrt(std::max(r * r - dist * dist, 0.0));
    const cplx perp = e * cplx{0.0, 1.0};
    return std::make_pair(dist * e + h * perp, dist * e - h * perp);
}

std::optional<std::pair<cplx, cplx>> circle_intersections(const ElementCoefficients& ec) {
    if (!(ec.z > 0.0)) return std::nullopt;
    return intersect_circles({0.0, 0.0}, std::sqrt(ec.beta_up), {ec.u, ec.w}, std::sqrt(ec.z));
}

namespace {

CaseOutcome case_machine(const ElementCoefficients& ec) {
    CaseOutcome out;
    out.linear_objective = ec.j <= kLinearJ;

    const double nj = ec.n - ec.j;
    if (std::abs(nj) <= kDegenerateNj) return half_plane_case(ec, std::move(out));

    const double rb = std::sqrt(ec.beta_up);
    const cplx gamma = candidate_gamma(ec);
    const cplx origin{0.0, 0.0};
    auto empty = [&](ElementCase c) {
        out.case_id = c;
        out.region_nonempty = false;
        out.phi = origin;
        out.candidates.push_back(make_candidate(ec, "origin", origin, false));
        return out;
    };
    auto pick = [&](ElementCase c, const char* name, cplx p) {
        out.case_id = c;
        out.phi = p;
        out.candidates.push_back(make_candidate(ec, name, p, true));
        return out;
    };

    if (nj > 0.0) {
        if (ec.z <= 0.0) return pick(ElementCase::NjPosZNonPos, "gamma", gamma);
        const double rz = std::sqrt(ec.z);
        if (ec.d1 + rb < rz) return empty(ElementCase::NjPosEnclosed);
        if (ec.d1 + rz < rb) return pick(ElementCase::NjPosHoleInside, "gamma", gamma);
        if (ec.d1 > rb + rz) return pick(ElementCase::NjPosDisjoint, "gamma", gamma);
        out.case_id = ElementCase::NjPosOverlap;
        const bool gamma_ok = in_ring_region(ec, gamma, true);
        out.candidates.push_back(make_candidate(ec, "gamma", gamma, gamma_ok));
        if (gamma_ok) {
            out.phi = gamma;
            return out;
        }
        const auto eps = circle_intersections(ec);
        if (!eps) {
            // Tangent within rounding: gamma sits on the excluded circle.
            out.phi = gamma;
            return out;
        }
        out.candidates.push_back(make_candidate(ec, "eps1", eps->first, true));
        out.candidates.push_back(make_candidate(ec, "eps2", eps->second, true));
        out.phi = std::norm(eps->first - gamma) <= std::norm(eps->second - gamma) ? eps->first
                                                                                 : eps->second;
        return out;
    }

    if (ec.z <= 0.0) return empty(ElementCase::NjNegZNonPos);
    const double rz = std::sqrt(ec.z);
    if (ec.d1 + rb < rz) return pick(ElementCase::NjNegInside, "gamma", gamma);
    const cplx eta = *candidate_eta(ec);
    if (ec.d1 + rz < rb) return pick(ElementCase::NjNegContained, "eta", eta);
    if (ec.d1 > rb + rz) return empty(ElementCase::NjNegDisjoint);
    out.case_id = ElementCase::NjNegOverlap;
    const bool gamma_ok = in_ring_region(ec, gamma, false);
    out.candidates.push_back(make_candidate(ec, "gamma", gamma, gamma_ok));
    if (gamma_ok) {
        out.phi = gamma;
        return out;
    }
    const bool eta_ok = in_budget(ec, eta);
    out.candidates.push_back(make_candidate(ec, "eta", eta, eta_ok));
    if (eta_ok) {
        out.phi = eta;
        return out;
    }
    const auto eps = circle_intersections(ec);
    if (!eps) {
        // Coincident circles: the lens is the budget disk itself.
        out.phi = gamma;
        return out;
    }
    out.candidates.push_back(make_candidate(ec, "eps1", eps->first, true));
    out.candidates.push_back(make_candidate(ec, "eps2", eps->second, true));
    out.phi = ec.bob(eps->first) >= ec.bob(eps->second) ? eps->first : eps->second;
    return out;
}

}  // namespace

CaseOutcome solve_surrogate(const ElementCoefficients& ec) {
    CaseOutcome out = case_machine(ec);
    // Nothing to gain from this element: stay at the origin when allowed.
    if (flat_objective(ec) && ec.c3_margin({0.0, 0.0}) >= 0.0) {
        out.phi = 0.0;
        out.region_nonempty = true;
        out.candidates.push_back(make_candidate(ec, "origin", 0.0, true));
    }
    return out;
}

CaseOutcome solve_element(Eigen::Index n, const ReflectVector& v, const ChannelSet& ch,
                          const PowerBudget& pb) {
    const PartialChannels pc = partial_channels(n, v, ch);
    return solve_surrogate(element_coefficients(n, pc, ch, pb));
}

CoordinateDescentResult coordinate_descent(const ChannelSet& ch, const PowerBudget& pb,
                                           int rounds, cplx init,
                                           const ElementObserver& observer) {
    if (rounds < 1) throw std::invalid_argument("coordinate_descent: rounds must be >= 1");
    CoordinateDescentResult res{ReflectVector::filled(ch.n_r(), init), {}, 0};
    for (int r = 0; r < rounds; ++r) {
        for (Eigen::Index n = 0; n < ch.n_r(); ++n) {
            const CaseOutcome out = solve_element(n, res.v, ch, pb);
            res.v.set_phi(n, out.phi);
            res.cases.push_back(out.case_id);
            if (out.phi != cplx{0.0, 0.0}) ++res.nonzero_updates;
            if (observer) observer(n, out, res.v);
        }
    }
    return res;
}

}  // namespace surveil
