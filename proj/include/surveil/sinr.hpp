#pragma once

#include <string>
#include <vector>

#include "surveil/scenario.hpp"

namespace surveil {

/// Augmented reflecting vector v = [phi_1 .. phi_N, 1]. The trailing entry
/// stands for the direct link and is pinned to 1.
class ReflectVector {
public:
    /// No-reflection vector [0, ..., 0, 1].
    explicit ReflectVector(Eigen::Index n_r);
    /// Builds v from the N element coefficients.
    static ReflectVector from_elements(const CVector& phi);
    static ReflectVector filled(Eigen::Index n_r, cplx value);

    Eigen::Index n_r() const { return v_.size() - 1; }
    /// Element coefficient, 0-based (element n in 1-based notation is n-1 here).
    cplx phi(Eigen::Index n) const { return v_[n]; }
    void set_phi(Eigen::Index n, cplx value);
    const CVector& augmented() const { return v_; }
    auto elements() const { return v_.head(n_r()); }

private:
    CVector v_;
};

/// h_{A-B} = [h_rb .* h_ar, h_ab], h_{R-B} = [h_rb, 0] and their Eve analogues.
struct AugmentedChannels {
    CVector h_a_b;
    CVector h_a_e;
    CVector h_r_b;
    CVector h_r_e;

    Eigen::Index n_r() const { return h_a_b.size() - 1; }
};

struct PowerBudget {
    double p_a = 1e8;       // transmit power, linear
    double p_max = 1e6;     // per-element reflected power budget, linear
    double sigma_r2 = 1.0;  // surface thermal noise
    double sigma_02 = 1.0;  // receiver noise

    /// Active scheme requires every field positive.
    void validate_active() const;
    /// Squared-amplitude bound of element n: p_max / (|h_ar[n]|^2 p_a + sigma_r2).
    double amplitude_budget(cplx h_ar_n) const {
        return p_max / (std::norm(h_ar_n) * p_a + sigma_r2);
    }
};

struct SinrReport {
    double sinr_b = 0.0;
    double sinr_e = 0.0;
    double rate = 0.0;  // bps/Hz
    bool eavesdrop_ok = false;
};

AugmentedChannels augment(const ChannelSet& ch);

/// Reflected power of element n (0-based): |phi_n|^2 (|h_ar[n]|^2 p_a + sigma_r2).
double element_power(const ReflectVector& v, const ChannelSet& ch, const PowerBudget& pb,
                     Eigen::Index n);

/// Bob's SINR via the scalar form P_A |h_A-B v|^2 / (sigma_r^2 ||diag(h_R-B)^H v||^2 + sigma_0^2).
double sinr_bob(const ReflectVector& v, const AugmentedChannels& aug, const PowerBudget& pb);
double sinr_eve(const ReflectVector& v, const AugmentedChannels& aug, const PowerBudget& pb);

/// The same ratios evaluated through the explicit Hermitian matrices
/// H = h^H h and diag(h_R) diag(h_R)^H.
double sinr_bob_quadratic(const ReflectVector& v, const AugmentedChannels& aug,
                          const PowerBudget& pb);
double sinr_eve_quadratic(const ReflectVector& v, const AugmentedChannels& aug,
                          const PowerBudget& pb);

/// Noise-plus-interference terms (b0, e0) of the two SINRs.
struct Denominators {
    double bob;
    double eve;
};
Denominators denominators_at(const ReflectVector& v, const AugmentedChannels& aug,
                             const PowerBudget& pb);

/// Eavesdropping succeeds when SINR_E >= SINR_B (1 - c3_tol); the rate is then
/// log2(1 + SINR_B), else 0.
SinrReport eavesdrop_rate(const ReflectVector& v, const AugmentedChannels& aug,
                          const PowerBudget& pb, double c3_tol = 0.0);
SinrReport make_report(double sinr_b, double sinr_e, double c3_tol = 0.0);

struct Violation {
    std::string constraint;  // "C1", "C2" or "C3"
    Eigen::Index index = -1; // element for C1, -1 otherwise
    double amount = 0.0;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<Violation> violations;
};

FeasibilityReport check_feasible(const ReflectVector& v, const ChannelSet& ch,
                                 const AugmentedChannels& aug, const PowerBudget& pb,
                                 double tol = 1e-6);

}  // namespace surveil
