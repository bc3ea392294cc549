#include "surveil/cone_program.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace surveil {

namespace {

double row_scale(const Eigen::RowVectorXd& row) {
    const double s = row.norm();
    return s > 0.0 ? s : 1.0;
}

double soc_scale(const SocBlock& blk) {
    double s = blk.c.norm();
    for (Eigen::Index r = 0; r < blk.a.rows(); ++r) s = std::max(s, blk.a.row(r).norm());
    return s > 0.0 ? s : 1.0;
}

// Real coefficients of Re(sum_n q_n v_n) and Im(sum_n q_n v_n) in the element part of x.
void add_re_part(Eigen::RowVectorXd& row, const SubproblemLayout& L, Eigen::Index n, cplx q,
                 double scale) {
    row[L.re(n)] += scale * q.real();
    row[L.im(n)] -= scale * q.imag();
}

void add_im_part(Eigen::RowVectorXd& row, const SubproblemLayout& L, Eigen::Index n, cplx q,
                 double scale) {
    row[L.re(n)] += scale * q.imag();
    row[L.im(n)] += scale * q.real();
}

// First-order lower bound of P_A |h v|^2 / y around (v0, y0), kept as
//   aux + (P_A |g0|^2 / y0^2) y - (2 P_A / y0) Re(conj(g0) h v) <= 0,   g0 = h v0.
LinearIneq signal_bound(const CVector& h, const CVector& v0, double y0, const PowerBudget& pb,
                        const SubproblemLayout& L, Eigen::Index aux, Eigen::Index y,
                        std::string group) {
    const Eigen::Index n_r = L.n_r;
    const cplx g0 = h.cwiseProduct(v0).sum();
    const double k = 2.0 * pb.p_a / y0;
    LinearIneq li;
    li.row = Eigen::RowVectorXd::Zero(L.size());
    li.row[aux] = 1.0;
    li.row[y] = pb.p_a * std::norm(g0) / (y0 * y0);
    for (Eigen::Index n = 0; n < n_r; ++n) add_re_part(li.row, L, n, std::conj(g0) * h[n], -k);
    li.rhs = k * (std::conj(g0) * h[n_r]).real();
    li.group = std::move(group);
    return li;
}

// y - sigma_0^2 >= sigma_r^2 ||diag(h_R)^H v||^2 as a rotated cone.
SocBlock denominator_cone(const CVector& h_r, const PowerBudget& pb, const SubproblemLayout& L,
                          Eigen::Index y, std::string group) {
    const Eigen::Index n_r = L.n_r;
    const double sr = std::sqrt(pb.sigma_r2);
    SocBlock blk;
    blk.a = Eigen::MatrixXd::Zero(2 * n_r + 1, L.size());
    blk.b = Eigen::VectorXd::Zero(2 * n_r + 1);
    for (Eigen::Index n = 0; n < n_r; ++n) {
        const cplx hc = std::conj(h_r[n]);
        Eigen::RowVectorXd re = Eigen::RowVectorXd::Zero(L.size());
        Eigen::RowVectorXd im = Eigen::RowVectorXd::Zero(L.size());
        add_re_part(re, L, n, hc, sr);
        add_im_part(im, L, n, hc, sr);
        blk.a.row(2 * n) = re;
        blk.a.row(2 * n + 1) = im;
    }
    blk.a(2 * n_r, y) = 0.5;
    blk.b[2 * n_r] = (-pb.sigma_02 - 1.0) / 2.0;
    blk.c = Eigen::RowVectorXd::Zero(L.size());
    blk.c[y] = 0.5;
    blk.d = (-pb.sigma_02 + 1.0) / 2.0;
    blk.group = std::move(group);
    return blk;
}

}  // namespace

void ConeProgram::validate() const {
    if (n_vars < 1) throw std::invalid_argument("ConeProgram: no variables");
    if (objective.size() != n_vars) throw std::invalid_argument("ConeProgram: objective size");
    if (!var_names.empty() && static_cast<Eigen::Index>(var_names.size()) != n_vars) {
        throw std::invalid_argument("ConeProgram: var_names size");
    }
    for (const auto& li : linear_ineqs) {
        if (li.row.size() != n_vars) throw std::invalid_argument("ConeProgram: linear row size");
    }
    for (const auto& blk : soc_blocks) {
        if (blk.a.rows() < 1) throw std::invalid_argument("ConeProgram: empty SOC block");
        if (blk.a.cols() != n_vars || blk.c.size() != n_vars || blk.b.size() != blk.a.rows()) {
            throw std::invalid_argument("ConeProgram: SOC block dimensions");
        }
    }
}

std::size_t ConeProgram::group_count() const {
    std::set<std::string> g;
    for (const auto& li : linear_ineqs) g.insert(li.group);
    for (const auto& blk : soc_blocks) g.insert(blk.group);
    return g.size();
}

ConstraintCheck check_constraints(const ConeProgram& cp, const Eigen::VectorXd& x) {
    if (x.size() != cp.n_vars) throw std::invalid_argument("check_constraints: dimension mismatch");
    ConstraintCheck out;
    std::size_t idx = 0;
    auto consider = [&](double viol, double scale, const std::string& group) {
        viol = std::max(viol, 0.0);
        out.max_violation = std::max(out.max_violation, viol);
        if (viol / scale > out.max_scaled_violation) {
            out.max_scaled_violation = viol / scale;
            out.worst_group = group;
            out.worst_index = idx;
        }
        ++idx;
    };
    for (const auto& li : cp.linear_ineqs) {
        consider(li.row.dot(x) - li.rhs, row_scale(li.row), li.group);
    }
    for (const auto& blk : cp.soc_blocks) {
        consider((blk.a * x + blk.b).norm() - (blk.c.dot(x) + blk.d), soc_scale(blk), blk.group);
    }
    return out;
}

double evaluate_constraints(const ConeProgram& cp, const Eigen::VectorXd& x) {
    return check_constraints(cp, x).max_violation;
}

CVector SubproblemLayout::elements(const Eigen::VectorXd& x) const {
    CVector v(n_r);
    for (Eigen::Index n = 0; n < n_r; ++n) v[n] = {x[re(n)], x[im(n)]};
    return v;
}

LinearizationPoint make_linearization_point(const ReflectVector& v0,
                                            const AugmentedChannels& aug,
                                            const PowerBudget& pb) {
    const Denominators den = denominators_at(v0, aug, pb);
    return {v0, den.bob, den.eve};
}

ConeProgram build_subproblem(const AugmentedChannels& aug, const ChannelSet& ch,
                             const PowerBudget& pb, const LinearizationPoint& lp) {
    if (!ch.finite() || !aug.h_a_b.allFinite() || !aug.h_a_e.allFinite()) {
        throw std::invalid_argument("build_subproblem: non-finite channel data");
    }
    const Eigen::Index n_r = aug.n_r();
    if (lp.v0.n_r() != n_r || ch.n_r() != n_r) {
        throw std::invalid_argument("build_subproblem: dimension mismatch");
    }
    if (!(lp.b0 >= pb.sigma_02) || !(lp.e0 >= pb.sigma_02)) {
        throw std::invalid_argument("build_subproblem: denominators below the noise floor");
    }
    const SubproblemLayout L{n_r};
    const CVector& v0 = lp.v0.augmented();

    ConeProgram cp;
    cp.n_vars = L.size();
    cp.objective = Eigen::VectorXd::Zero(L.size());
    cp.objective[L.a()] = 1.0;
    cp.var_names.resize(L.size());
    for (Eigen::Index n = 0; n < n_r; ++n) {
        cp.var_names[L.re(n)] = "re_v" + std::to_string(n + 1);
        cp.var_names[L.im(n)] = "im_v" + std::to_string(n + 1);
    }
    cp.var_names[L.a()] = "a";
    cp.var_names[L.b()] = "b";
    cp.var_names[L.c()] = "c";
    cp.var_names[L.d()] = "d";
    cp.var_names[L.e()] = "e";

    for (Eigen::Index n = 0; n < n_r; ++n) {
        SocBlock blk;
        blk.a = Eigen::MatrixXd::Zero(2, L.size());
        blk.a(0, L.re(n)) = 1.0;
        blk.a(1, L.im(n)) = 1.0;
        blk.b = Eigen::VectorXd::Zero(2);
        blk.c = Eigen::RowVectorXd::Zero(L.size());
        blk.d = std::sqrt(pb.amplitude_budget(ch.h_ar[n]));
        blk.group = "C1";
        cp.soc_blocks.push_back(std::move(blk));
    }

    cp.linear_ineqs.push_back(signal_bound(aug.h_a_b, v0, lp.b0, pb, L, L.a(), L.b(), "C4'"));
    cp.soc_blocks.push_back(denominator_cone(aug.h_r_b, pb, L, L.b(), "C5'"));
    cp.linear_ineqs.push_back(signal_bound(aug.h_a_e, v0, lp.e0, pb, L, L.c(), L.e(), "C8"));
    cp.soc_blocks.push_back(denominator_cone(aug.h_r_e, pb, L, L.e(), "C9"));

    // c d >= P_A |h_A-B v|^2
    {
        const double sp = std::sqrt(pb.p_a);
        SocBlock blk;
        blk.a = Eigen::MatrixXd::Zero(3, L.size());
        blk.b = Eigen::VectorXd::Zero(3);
        blk.a(0, L.c()) = 0.5;
        blk.a(0, L.d()) = -0.5;
        Eigen::RowVectorXd re = Eigen::RowVectorXd::Zero(L.size());
        Eigen::RowVectorXd im = Eigen::RowVectorXd::Zero(L.size());
        for (Eigen::Index n = 0; n < n_r; ++n) {
            add_re_part(re, L, n, aug.h_a_b[n], sp);
            add_im_part(im, L, n, aug.h_a_b[n], sp);
        }
        blk.a.row(1) = re;
        blk.a.row(2) = im;
        blk.b[1] = sp * aug.h_a_b[n_r].real();
        blk.b[2] = sp * aug.h_a_b[n_r].imag();
        blk.c = Eigen::RowVectorXd::Zero(L.size());
        blk.c[L.c()] = 0.5;
        blk.c[L.d()] = 0.5;
        blk.group = "C10'";
        cp.soc_blocks.push_back(std::move(blk));
    }

    // d <= sigma_r^2 (2 Re(v0^H H_R-B v) - v0^H H_R-B v0) + sigma_0^2
    {
        LinearIneq li;
        li.row = Eigen::RowVectorXd::Zero(L.size());
        li.row[L.d()] = 1.0;
        double quad0 = 0.0;
        for (Eigen::Index n = 0; n < n_r; ++n) {
            const double w = std::norm(aug.h_r_b[n]);
            li.row[L.re(n)] -= 2.0 * pb.sigma_r2 * w * v0[n].real();
            li.row[L.im(n)] -= 2.0 * pb.sigma_r2 * w * v0[n].imag();
            quad0 += w * std::norm(v0[n]);
        }
        li.rhs = pb.sigma_02 - pb.sigma_r2 * quad0;
        li.group = "C11'";
        cp.linear_ineqs.push_back(std::move(li));
    }
    return cp;
}

Eigen::VectorXd taylor_point(const AugmentedChannels& aug, const PowerBudget& pb,
                             const LinearizationPoint& lp) {
    const SubproblemLayout L{aug.n_r()};
    Eigen::VectorXd x = Eigen::VectorXd::Zero(L.size());
    for (Eigen::Index n = 0; n < L.n_r; ++n) {
        x[L.re(n)] = lp.v0.phi(n).real();
        x[L.im(n)] = lp.v0.phi(n).imag();
    }
    const double sb = sinr_bob(lp.v0, aug, pb);
    x[L.a()] = sb;
    x[L.b()] = lp.b0;
    x[L.c()] = sb;
    x[L.d()] = lp.b0;
    x[L.e()] = lp.e0;
    return x;
}

}  // namespace surveil
