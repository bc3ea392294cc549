#include "surveil/passive.hpp"

#include <cmath>
#include <stdexcept>

namespace surveil {

PowerBudget passive_budget(const PowerBudget& pb) {
    PowerBudget out = pb;
    out.sigma_r2 = 0.0;
    return out;
}

CaseOutcome solve_unit_modulus(const ElementCoefficients& ec) {
    CaseOutcome out;
    out.linear_objective = ec.j <= kLinearJ;
    const double nj = ec.n - ec.j;
    const bool half_plane = std::abs(nj) <= kDegenerateNj;
    out.case_id = half_plane ? ElementCase::NjZeroHalfPlane
                             : (nj > 0.0 ? ElementCase::NjPosOverlap : ElementCase::NjNegOverlap);

    // On |phi| = 1 the constraint margin is affine in (Re phi, Im phi).
    const double a = ec.p - ec.l;
    const double b = ec.q - ec.m;
    const double rhs = ec.k - ec.o - nj;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(rhs), 1e-300});
    auto feasible = [&](cplx p) { return a * p.real() + b * p.imag() >= rhs - 1e-12 * scale; };
    auto consider = [&](const char* name, cplx p) {
        out.candidates.push_back({name, p, feasible(p), ec.bob(p)});
    };

    ElementCoefficients unit = ec;
    unit.beta_up = 1.0;
    consider("gamma", candidate_gamma(unit));
    if (const auto cut = intersect_line_circle(a, b, rhs, 1.0)) {
        consider("eps1", cut->first / std::abs(cut->first));
        consider("eps2", cut->second / std::abs(cut->second));
    }
    const Candidate* best = nullptr;
    for (const Candidate& c : out.candidates) {
        if (c.feasible && (!best || c.objective > best->objective)) best = &c;
    }
    if (best) {
        out.phi = best->point;
        return out;
    }
    out.region_nonempty = false;
    const double nrm = std::hypot(a, b);
    out.phi = nrm > 0.0 ? cplx{a / nrm, b / nrm} : cplx{1.0, 0.0};
    return out;
}

ReflectVector passive_optimize(const ChannelSet& ch, const PowerBudget& pb, int rounds) {
    if (rounds < 1) throw std::invalid_argument("passive_optimize: rounds must be >= 1");
    const PowerBudget zero_noise = passive_budget(pb);
    ReflectVector v = ReflectVector::filled(ch.n_r(), {1.0, 0.0});
    for (int r = 0; r < rounds; ++r) {
        for (Eigen::Index n = 0; n < ch.n_r(); ++n) {
            const PartialChannels pc = partial_channels(n, v, ch);
            const CaseOutcome out = solve_unit_modulus(element_coefficients(n, pc, ch, zero_noise));
            v.set_phi(n, out.phi);
        }
    }
    return v;
}

SinrReport passive_rate(const ReflectVector& v, const ChannelSet& ch, const PowerBudget& pb,
                        double c3_tol) {
    for (Eigen::Index n = 0; n < v.n_r(); ++n) {
        if (std::abs(std::abs(v.phi(n)) - 1.0) > 1e-9) {
            throw std::domain_error("passive_rate: coefficients must have unit modulus");
        }
    }
    return eavesdrop_rate(v, augment(ch), passive_budget(pb), c3_tol);
}

}  // namespace surveil
