#include "surveil/sinr.hpp"

#include <stdexcept>

namespace surveil {

ReflectVector::ReflectVector(Eigen::Index n_r) : v_(CVector::Zero(n_r + 1)) {
    if (n_r < 1) throw std::invalid_argument("ReflectVector: n_r must be >= 1");
    v_[n_r] = 1.0;
}

ReflectVector ReflectVector::from_elements(const CVector& phi) {
    ReflectVector r(phi.size());
    r.v_.head(phi.size()) = phi;
    return r;
}

ReflectVector ReflectVector::filled(Eigen::Index n_r, cplx value) {
    return from_elements(CVector::Constant(n_r, value));
}

void ReflectVector::set_phi(Eigen::Index n, cplx value) {
    if (n < 0 || n >= n_r()) throw std::out_of_range("ReflectVector: element index");
    v_[n] = value;
}

void PowerBudget::validate_active() const {
    if (!(p_a > 0.0) || !(p_max > 0.0) || !(sigma_r2 > 0.0) || !(sigma_02 > 0.0)) {
        throw std::invalid_argument("PowerBudget: active scheme needs positive p_a, p_max, "
                                    "sigma_r2 and sigma_02");
    }
}

AugmentedChannels augment(const ChannelSet& ch) {
    const Eigen::Index n = ch.n_r();
    AugmentedChannels a;
    a.h_a_b.resize(n + 1);
    a.h_a_e.resize(n + 1);
    a.h_r_b = CVector::Zero(n + 1);
    a.h_r_e = CVector::Zero(n + 1);
    a.h_a_b.head(n) = ch.h_rb.cwiseProduct(ch.h_ar);
    a.h_a_e.head(n) = ch.h_re.cwiseProduct(ch.h_ar);
    a.h_a_b[n] = ch.h_ab;
    a.h_a_e[n] = ch.h_ae;
    a.h_r_b.head(n) = ch.h_rb;
    a.h_r_e.head(n) = ch.h_re;
    return a;
}

double element_power(const ReflectVector& v, const ChannelSet& ch, const PowerBudget& pb,
                     Eigen::Index n) {
    if (n < 0 || n >= v.n_r()) throw std::out_of_range("element_power: element index");
    return std::norm(v.phi(n)) * (std::norm(ch.h_ar[n]) * pb.p_a + pb.sigma_r2);
}

namespace {

// h is used as a row vector: h v = sum_i h_i v_i.
double scalar_form(const CVector& h_a, const CVector& h_r, const CVector& v,
                   const PowerBudget& pb) {
    const cplx signal = h_a.cwiseProduct(v).sum();
    const double noise = h_r.cwiseProduct(v).squaredNorm();
    return pb.p_a * std::norm(signal) / (pb.sigma_r2 * noise + pb.sigma_02);
}

double quadratic_form(const CVector& h_a, const CVector& h_r, const CVector& v,
                      const PowerBudget& pb) {
    // H_A = h^H h (outer product of the conjugated row), H_R = diag(h_R) diag(h_R)^H.
    const Eigen::MatrixXcd h_sig = h_a.conjugate() * h_a.transpose();
    const Eigen::MatrixXcd h_noise = h_r.cwiseAbs2().cast<cplx>().asDiagonal();
    const double num = (v.adjoint() * h_sig * v).value().real();
    const double den = (v.adjoint() * h_noise * v).value().real();
    return pb.p_a * num / (pb.sigma_r2 * den + pb.sigma_02);
}

}  // namespace

double sinr_bob(const ReflectVector& v, const AugmentedChannels& aug, const PowerBudget& pb) {
    return scalar_form(aug.h_a_b, aug.h_r_b, v.augmented(), pb);
}

double sinr_eve(const ReflectVector& v, const AugmentedChannels& aug, const PowerBudget& pb) {
    return scalar_form(aug.h_a_e, aug.h_r_e, v.augmented(), pb);
}

double sinr_bob_quadratic(const ReflectVector& v, const AugmentedChannels& aug,
                          const PowerBudget& pb) {
    return quadratic_form(aug.h_a_b, aug.h_r_b, v.augmented(), pb);
}

double sinr_eve_quadratic(const ReflectVector& v, const AugmentedChannels& aug,
                          const PowerBudget& pb) {
    return quadratic_form(aug.h_a_e, aug.h_r_e, v.augmented(), pb);
}

Denominators denominators_at(const ReflectVector& v, const AugmentedChannels& aug,
                             const PowerBudget& pb) {
    const CVector& x = v.augmented();
    return {pb.sigma_r2 * aug.h_r_b.cwiseProduct(x).squaredNorm() + pb.sigma_02,
            pb.sigma_r2 * aug.h_r_e.cwiseProduct(x).squaredNorm() + pb.sigma_02};
}

SinrReport make_report(double sinr_b, double sinr_e, double c3_tol) {
    SinrReport r;
    r.sinr_b = sinr_b;
    r.sinr_e = sinr_e;
    r.eavesdrop_ok = sinr_e >= sinr_b * (1.0 - c3_tol);
    r.rate = r.eavesdrop_ok ? std::log2(1.0 + sinr_b) : 0.0;
    return r;
}

SinrReport eavesdrop_rate(const ReflectVector& v, const AugmentedChannels& aug,
                          const PowerBudget& pb, double c3_tol) {
    return make_report(sinr_bob(v, aug, pb), sinr_eve(v, aug, pb), c3_tol);
}

FeasibilityReport check_feasible(const ReflectVector& v, const ChannelSet& ch,
                                 const AugmentedChannels& aug, const PowerBudget& pb,
                                 double tol) {
    if (tol < 0.0) throw std::invalid_argument("check_feasible: tol must be >= 0");
    FeasibilityReport rep;
    for (Eigen::Index n = 0; n < v.n_r(); ++n) {
        const double bound = pb.amplitude_budget(ch.h_ar[n]);
        const double amp2 = std::norm(v.phi(n));
        if (amp2 > bound * (1.0 + tol)) {
            rep.violations.push_back({"C1", n, amp2 - bound});
        }
    }
    const cplx last = v.augmented()[v.n_r()];
    if (last != cplx{1.0, 0.0}) {
        rep.violations.push_back({"C2", -1, std::abs(last - 1.0)});
    }
    const double sb = sinr_bob(v, aug, pb);
    const double se = sinr_eve(v, aug, pb);
    if (se < sb * (1.0 - tol)) rep.violations.push_back({"C3", -1, sb - se});
    rep.feasible = rep.violations.empty();
    return rep;
}

}  // namespace surveil
