#include "surveil/cone_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace surveil {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterLimit: return "iter-limit";
        case SolveStatus::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("SolverOptions: tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize c'x  s.t.  G x + s = h,  s in R+^l x Q^{q_1} x ... x Q^{q_k}
struct ConicForm {
    MatrixXd g;
    VectorXd h;
    VectorXd c;
    Index l = 0;
    std::vector<Index> soc_dims;
    std::vector<Index> soc_start;

    Index rows() const { return g.rows(); }
    Index degree() const { return l + static_cast<Index>(soc_dims.size()); }
};

ConicForm to_conic(const ConeProgram& cp) {
    ConicForm f;
    Index m = static_cast<Index>(cp.linear_ineqs.size());
    f.l = m;
    for (const auto& blk : cp.soc_blocks) {
        f.soc_start.push_back(m);
        f.soc_dims.push_back(blk.a.rows() + 1);
        m += blk.a.rows() + 1;
    }
    f.g = MatrixXd::Zero(m, cp.n_vars);
    f.h = VectorXd::Zero(m);
    f.c = -cp.objective;
    for (Index i = 0; i < f.l; ++i) {
        f.g.row(i) = cp.linear_ineqs[i].row;
        f.h[i] = cp.linear_ineqs[i].rhs;
    }
    for (std::size_t k = 0; k < cp.soc_blocks.size(); ++k) {
        const auto& blk = cp.soc_blocks[k];
        const Index s = f.soc_start[k];
        f.g.row(s) = -blk.c;
        f.h[s] = blk.d;
        f.g.middleRows(s + 1, blk.a.rows()) = -blk.a;
        f.h.segment(s + 1, blk.a.rows()) = blk.b;
    }
    return f;
}

// Equilibration: x = col .* x_scaled, constraint rows multiplied by row (one
// scalar per cone block so the cones are preserved), objective by 1/obj.
struct Scaling {
    VectorXd row;
    VectorXd col;
    double obj = 1.0;
};

Scaling equilibrate(ConicForm& f) {
    const Index m = f.rows();
    const Index n = f.g.cols();
    Scaling sc{VectorXd::Ones(m), VectorXd::Ones(n), 1.0};
    auto block_scale = [&](Index start, Index len) {
        double s = 0.0;
        for (Index i = start; i < start + len; ++i) s = std::max(s, f.g.row(i).norm());
        if (s > 0.0) {
            f.g.middleRows(start, len) /= s;
            f.h.segment(start, len) /= s;
            sc.row.segment(start, len) /= s;
        }
    };
    for (int pass = 0; pass < 8; ++pass) {
        for (Index i = 0; i < f.l; ++i) block_scale(i, 1);
        for (std::size_t k = 0; k < f.soc_dims.size(); ++k) block_scale(f.soc_start[k], f.soc_dims[k]);
        for (Index j = 0; j < n; ++j) {
            const double cn = f.g.col(j).cwiseAbs().maxCoeff();
            if (cn > 0.0) {
                const double s = 1.0 / std::sqrt(cn);
                f.g.col(j) *= s;
                f.c[j] *= s;
                sc.col[j] *= s;
            }
        }
    }
    // Final exact row normalization.
    for (Index i = 0; i < f.l; ++i) block_scale(i, 1);
    for (std::size_t k = 0; k < f.soc_dims.size(); ++k) block_scale(f.soc_start[k], f.soc_dims[k]);
    const double cn = f.c.norm();
    if (cn > 0.0) {
        f.c /= cn;
        sc.obj = cn;
    }
    return sc;
}

// Nesterov-Todd scaling W (symmetric, block diagonal) with W z = W^{-1} s = lambda.
struct NtScaling {
    VectorXd lp_w;                   // sqrt(s / z) per linear row
    std::vector<double> eta;         // per SOC
    std::vector<VectorXd> wbar;      // per SOC, hyperbolic unit vector
};

double soc_det_sqrt(const VectorXd& u) {
    const double t = u[0];
    const double r = u.tail(u.size() - 1).norm();
    return std::sqrt(std::max((t - r) * (t + r), 0.0));
}

class Cones {
public:
    explicit Cones(const ConicForm& f) : f_(f) {}

    VectorXd identity() const {
        VectorXd e = VectorXd::Zero(f_.rows());
        e.head(f_.l).setOnes();
        for (Index s : f_.soc_start) e[s] = 1.0;
        return e;
    }

    // Largest step alpha s.t. u + alpha du stays in the cone (inf if unbounded).
    double max_step(const VectorXd& u, const VectorXd& du) const {
        double a = kInf;
        for (Index i = 0; i < f_.l; ++i) {
            if (du[i] < 0.0) a = std::min(a, -u[i] / du[i]);
        }
        for (std::size_t k = 0; k < f_.soc_dims.size(); ++k) {
            const Index s = f_.soc_start[k];
            const Index q = f_.soc_dims[k];
            const double x0 = u[s];
            const double d0 = du[s];
            const auto x1 = u.segment(s + 1, q - 1);
            const auto d1 = du.segment(s + 1, q - 1);
            const double aa = d0 * d0 - d1.squaredNorm();
            if (d0 >= 0.0 && aa >= 0.0) continue;
            const double bb = x0 * d0 - x1.dot(d1);
            const double cc = std::max((x0 - x1.norm()) * (x0 + x1.norm()), 0.0);
            const double den = -bb + std::sqrt(std::max(bb * bb - aa * cc, 0.0));
            if (den > 0.0) a = std::min(a, cc / den);
        }
        return a;
    }

    // Smallest "eigenvalue" shift needed to put u in the cone.
    double infeasibility(const VectorXd& u) const {
        double worst = -kInf;
        for (Index i = 0; i < f_.l; ++i) worst = std::max(worst, -u[i]);
        for (std::size_t k = 0; k < f_.soc_dims.size(); ++k) {
            const Index s = f_.soc_start[k];
            worst = std::max(worst, u.segment(s + 1, f_.soc_dims[k] - 1).norm() - u[s]);
        }
        return worst;
    }

    NtScaling nt_scaling(const VectorXd& s, const VectorXd& z) const {
        NtScaling w;
        w.lp_w = (s.head(f_.l).array() / z.head(f_.l).array()).sqrt();
        for (std::size_t k = 0; k < f_.soc_dims.size(); ++k) {
            const Index st = f_.soc_start[k];
            const Index q = f_.soc_dims[k];
            const VectorXd sk = s.segment(st, q);
            const VectorXd zk = z.segment(st, q);
            const double sn = soc_det_sqrt(sk);
            const double zn = soc_det_sqrt(zk);
            const VectorXd sb = sk / sn;
            VectorXd zb = zk / zn;
            const double gamma = std::sqrt((1.0 + sb.dot(zb)) / 2.0);
            zb.tail(q - 1) *= -1.0;
            w.eta.push_back(std::sqrt(sn / zn));
            w.wbar.push_back((sb + zb) / (2.0 * gamma));
        }
        return w;
    }

    // W u (inverse = false) or W^{-1} u (inverse = true), applied per cone to
    // every column of u.
    MatrixXd apply(const NtScaling& w, const MatrixXd& u, bool inverse) const {
        MatrixXd out(u.rows(), u.cols());
        for (Index i = 0; i < f_.l; ++i) {
            out.row(i) = u.row(i) * (inverse ? 1.0 / w.lp_w[i] : w.lp_w[i]);
        }
        for (std::size_t k = 0; k < f_.soc_dims.size(); ++k) {
            const Index st = f_.soc_start[k];
            const Index q = f_.soc_dims[k];
            const VectorXd& wb = w.wbar[k];
            const double w0 = wb[0];
            const auto w1 = wb.tail(q - 1);
            const double scale = inverse ? 1.0 / w.eta[k] : w.eta[k];
            const double sgn = inverse ? -1.0 : 1.0;
            for (Index col = 0; col < u.cols(); ++col) {
                const double u0 = u(st, col);
                const auto u1 = u.col(col).segment(st + 1, q - 1);
                const double w1u1 = w1.dot(u1);
                out(st, col) = scale * (w0 * u0 + sgn * w1u1);
                out.col(col).segment(st + 1, q - 1) =
                    scale * (sgn * u0 * w1 + u1 + (w1u1 / (1.0 + w0)) * w1);
            }
        }
        return out;
    }

    VectorXd apply(const NtScaling& w, const VectorXd& u, bool inverse) const {
        return apply(w, MatrixXd(u), inverse).col(0);
    }

    // Jordan product u o v.
    VectorXd product(const VectorXd& u, const VectorXd& v) const {
        VectorXd r(u.size());
        r.head(f_.l) = u.head(f_.l).cwiseProduct(v.head(f_.l));
        for (std::size_t k = 0; k < f_.soc_dims.size(); ++k) {
            const Index st = f_.soc_start[k];
            const Index q = f_.soc_dims[k];
            r[st] = u.segment(st, q).dot(v.segment(st, q));
            r.segment(st + 1, q - 1) =
                u[st] * v.segment(st + 1, q - 1) + v[st] * u.segment(st + 1, q - 1);
        }
        return r;
    }

    // Solves lambda o x = r.
    VectorXd divide(const VectorXd& lambda, const VectorXd& r) const {
        VectorXd x(r.size());
        x.head(f_.l) = r.head(f_.l).cwiseQuotient(lambda.head(f_.l));
        for (std::size_t k = 0; k < f_.soc_dims.size(); ++k) {
            const Index st = f_.soc_start[k];
            const Index q = f_.soc_dims[k];
            const double l0 = lambda[st];
            const auto l1 = lambda.segment(st + 1, q - 1);
            const double det = (l0 - l1.norm()) * (l0 + l1.norm());
            const double x0 = (l0 * r[st] - l1.dot(r.segment(st + 1, q - 1))) / det;
            x[st] = x0;
            x.segment(st + 1, q - 1) = (r.segment(st + 1, q - 1) - x0 * l1) / l0;
        }
        return x;
    }

private:
    const ConicForm& f_;
};

// Reduced KKT system [0 G'; G -W^2] [x; z] = [r1; r2] via normal equations.
class KktSolver {
public:
    KktSolver(const ConicForm& f, const Cones& cones, const NtScaling& w)
        : f_(f), cones_(cones), w_(w) {
        gs_ = cones.apply(w, f.g, true);
        // G^T W^-2 G = P R^T R P^T from a QR of the scaled matrix, which avoids
        // squaring its condition number.
        qr_.compute(gs_);
        ok_ = qr_.rank() == gs_.cols() && gs_.allFinite();
    }

    bool ok() const { return ok_; }

    void solve(const VectorXd& r1, const VectorXd& r2, VectorXd& x, VectorXd& z) const {
        once(r1, r2, x, z);
        auto residual = [&](const VectorXd& xc, const VectorXd& zc, VectorXd& e1, VectorXd& e2) {
            e1 = r1 - f_.g.transpose() * zc;
            e2 = r2 - (f_.g * xc - cones_.apply(w_, cones_.apply(w_, zc, false), false));
            return std::max(e1.lpNorm<Eigen::Infinity>(), e2.lpNorm<Eigen::Infinity>());
        };
        VectorXd e1, e2;
        double err = residual(x, z, e1, e2);
        for (int it = 0; it < 10 && err > 0.0; ++it) {
            VectorXd dx, dz;
            once(e1, e2, dx, dz);
            const VectorXd xn = x + dx;
            const VectorXd zn = z + dz;
            VectorXd f1, f2;
            const double errn = residual(xn, zn, f1, f2);
            if (!(errn < 0.5 * err)) {
                if (errn < err) { x = xn; z = zn; }
                break;
            }
            x = xn;
            z = zn;
            e1 = std::move(f1);
            e2 = std::move(f2);
            err = errn;
        }
    }

private:
    void once(const VectorXd& r1, const VectorXd& r2, VectorXd& x, VectorXd& z) const {
        const VectorXd wr2 = cones_.apply(w_, r2, true);
        const Index n = gs_.cols();
        const auto r = qr_.matrixR().topLeftCorner(n, n).template triangularView<Eigen::Upper>();
        VectorXd y = qr_.colsPermutation().transpose() * (r1 + gs_.transpose() * wr2);
        r.transpose().solveInPlace(y);
        r.solveInPlace(y);
        x = qr_.colsPermutation() * y;
        z = cones_.apply(w_, VectorXd(gs_ * x - wr2), true);
    }

    const ConicForm& f_;
    const Cones& cones_;
    const NtScaling& w_;
    MatrixXd gs_;
    Eigen::ColPivHouseholderQR<MatrixXd> qr_;
    bool ok_ = false;
};

struct Iterate {
    VectorXd x, s, z;
    double tau = 1.0;
    double kappa = 1.0;
};

ConeSolution finish(const ConeProgram& cp, const Scaling& sc, const Iterate& it,
                    SolveStatus status, double kkt, int iters) {
    ConeSolution sol;
    sol.status = status;
    sol.iterations = iters;
    sol.kkt_residual = kkt;
    const double t = (status == SolveStatus::Infeasible || status == SolveStatus::Unbounded)
                         ? 1.0
                         : it.tau;
    sol.x = sc.col.cwiseProduct(it.x) / t;
    sol.objective_value = cp.objective.dot(sol.x);
    if (status == SolveStatus::Optimal || status == SolveStatus::IterLimit) {
        sol.duals = sc.obj * sc.row.cwiseProduct(it.z) / t;
        const ConicForm f = to_conic(cp);
        sol.dual_objective = f.h.dot(sol.duals);
    }
    return sol;
}

}  // namespace

ConeSolution solve(const ConeProgram& cp, const SolverOptions& opts) {
    cp.validate();
    opts.validate();
    ConicForm f = to_conic(cp);
    const Scaling sc = equilibrate(f);
    const Cones cones(f);
    const Index n = f.g.cols();
    const Index m = f.rows();
    const double nrm_h = std::max(1.0, f.h.norm());
    const double nrm_c = std::max(1.0, f.c.norm());
    const double tol = opts.tol;

    Iterate it;
    const VectorXd e = cones.identity();
    {
        // Least-norm primal and dual starting points, shifted into the cone.
        NtScaling ident;
        ident.lp_w = VectorXd::Ones(f.l);
        for (Index q : f.soc_dims) {
            ident.eta.push_back(1.0);
            VectorXd wb = VectorXd::Zero(q);
            wb[0] = 1.0;
            ident.wbar.push_back(wb);
        }
        const KktSolver kkt(f, cones, ident);
        if (!kkt.ok()) {
            ConeSolution sol;
            sol.x = VectorXd::Zero(n);
            sol.status = SolveStatus::NumericalFailure;
            return sol;
        }
        VectorXd x, z, xd, zd;
        kkt.solve(VectorXd::Zero(n), f.h, x, z);
        it.x = x;
        it.s = -z;
        kkt.solve(-f.c, VectorXd::Zero(m), xd, zd);
        it.z = zd;
        const double as = cones.infeasibility(it.s);
        if (as >= -1e-8 * std::max(1.0, it.s.norm())) it.s += (1.0 + as) * e;
        const double az = cones.infeasibility(it.z);
        if (az >= -1e-8 * std::max(1.0, it.z.norm())) it.z += (1.0 + az) * e;
    }

    const double degree = static_cast<double>(f.degree());
    Iterate best = it;
    double best_kkt = kInf;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        const VectorXd rx = f.g.transpose() * it.z + f.c * it.tau;
        const VectorXd rz = it.s + f.g * it.x - f.h * it.tau;
        const double cx = f.c.dot(it.x);
        const double hz = f.h.dot(it.z);
        const double rt = it.kappa + cx + hz;
        const double sz = it.s.dot(it.z);
        const double mu = (sz + it.tau * it.kappa) / (degree + 1.0);

        const double pres = rz.norm() / it.tau / nrm_h;
        const double dres = rx.norm() / it.tau / nrm_c;
        const double pcost = cx / it.tau;
        const double dcost = -hz / it.tau;
        const double gap = sz / (it.tau * it.tau);
        double relgap = kInf;
        if (pcost < 0.0) relgap = gap / -pcost;
        else if (dcost > 0.0) relgap = gap / dcost;
        const double kkt = std::max({pres, dres, std::min(gap, relgap)});
        if (std::isfinite(kkt) && kkt < best_kkt) {
            best_kkt = kkt;
            best = it;
        }

        if (pres <= tol && dres <= tol && (gap <= tol || relgap <= tol)) {
            const VectorXd x = sc.col.cwiseProduct(it.x) / it.tau;
            if (check_constraints(cp, x).max_scaled_violation <= tol) {
                return finish(cp, sc, it, SolveStatus::Optimal, kkt, iter);
            }
        }
        // Infeasibility certificates of the homogeneous embedding.
        if (hz < 0.0 && (f.g.transpose() * it.z).norm() <= tol * -hz) {
            Iterate cert = it;
            cert.z /= -hz;
            return finish(cp, sc, cert, SolveStatus::Infeasible, kkt, iter);
        }
        if (cx < 0.0 && (f.g * it.x + it.s).norm() <= tol * -cx) {
            Iterate cert = it;
            cert.x /= -cx;
            return finish(cp, sc, cert, SolveStatus::Unbounded, kkt, iter);
        }

        const NtScaling w = cones.nt_scaling(it.s, it.z);
        const VectorXd lambda = cones.apply(w, it.z, false);
        const KktSolver kkt_solver(f, cones, w);
        if (!kkt_solver.ok()) {
            return finish(cp, sc, best, SolveStatus::NumericalFailure, best_kkt, iter);
        }
        VectorXd x1, z1;
        kkt_solver.solve(-f.c, f.h, x1, z1);
        const double den_tau = f.c.dot(x1) + f.h.dot(z1) - it.kappa / it.tau;

        struct Direction {
            VectorXd dx, ds, dz;
            double dtau, dkappa;
        };
        auto direction = [&](double factor, const VectorXd& ds_tilde, double rhs_kappa) {
            VectorXd x2, z2;
            kkt_solver.solve(-factor * rx, -factor * rz - cones.apply(w, ds_tilde, false), x2, z2);
            Direction d;
            d.dtau = (-factor * rt - f.c.dot(x2) - f.h.dot(z2) - rhs_kappa / it.tau) / den_tau;
            d.dx = x2 + d.dtau * x1;
            d.dz = z2 + d.dtau * z1;
            d.dkappa = (rhs_kappa - it.kappa * d.dtau) / it.tau;
            // Taken from the linearized primal equation so rounding in dz does
            // not leak into the primal residual.
            d.ds = -factor * rz - f.g * d.dx + f.h * d.dtau;
            return d;
        };
        auto step_to_boundary = [&](const Direction& d) {
            double a = std::min(cones.max_step(it.s, d.ds), cones.max_step(it.z, d.dz));
            if (d.dtau < 0.0) a = std::min(a, -it.tau / d.dtau);
            if (d.dkappa < 0.0) a = std::min(a, -it.kappa / d.dkappa);
            return a;
        };

        // Predictor.
        const Direction aff = direction(1.0, -lambda, -it.tau * it.kappa);
        const double a_aff = std::min(1.0, step_to_boundary(aff));
        const double sigma = std::clamp(std::pow(1.0 - a_aff, 3), 0.0, 1.0);

        // Corrector.
        const VectorXd corr = cones.product(cones.apply(w, aff.ds, true), cones.apply(w, aff.dz, false));
        const VectorXd ds_tilde = cones.divide(lambda, VectorXd(-cones.product(lambda, lambda) + sigma * mu * e - corr));
        const Direction d = direction(1.0 - sigma, ds_tilde,
                                      -it.tau * it.kappa + sigma * mu - aff.dtau * aff.dkappa);
        if (!d.dx.allFinite() || !d.dz.allFinite() || !d.ds.allFinite() ||
            !std::isfinite(d.dtau) || !std::isfinite(d.dkappa)) {
            return finish(cp, sc, best, SolveStatus::NumericalFailure, best_kkt, iter);
        }
        const double alpha = std::min(1.0, 0.99 * step_to_boundary(d));
        it.x += alpha * d.dx;
        it.s += alpha * d.ds;
        it.z += alpha * d.dz;
        it.tau += alpha * d.dtau;
        it.kappa += alpha * d.dkappa;
        if (!(it.tau > 0.0) || !(it.kappa > 0.0)) {
            return finish(cp, sc, best, SolveStatus::NumericalFailure, best_kkt, iter);
        }
    }
    return finish(cp, sc, best, SolveStatus::IterLimit, best_kkt, opts.max_iters);
}

CertifyReport certify(const ConeProgram& cp, const ConeSolution& sol) {
    const ConstraintCheck chk = check_constraints(cp, sol.x);
    CertifyReport rep;
    rep.max_violation = chk.max_violation;
    rep.max_scaled_violation = chk.max_scaled_violation;
    rep.worst_group = chk.worst_group;
    rep.worst_index = chk.worst_index;
    if (sol.duals.size() > 0) {
        const ConicForm f = to_conic(cp);
        rep.has_duals = true;
        rep.duality_gap = std::abs(f.h.dot(sol.duals) - cp.objective.dot(sol.x));
        rep.dual_residual = (f.g.transpose() * sol.duals + f.c).norm();
    }
    return rep;
}

}  // namespace surveil
