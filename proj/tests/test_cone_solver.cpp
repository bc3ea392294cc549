#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "surveil/cone_solver.hpp"

using namespace surveil;

namespace {

ConeProgram empty_program(Eigen::Index n) {
    ConeProgram cp;
    cp.n_vars = n;
    cp.objective = Eigen::VectorXd::Zero(n);
    return cp;
}

LinearIneq ineq(std::initializer_list<double> row, double rhs) {
    LinearIneq li;
    li.row = Eigen::RowVectorXd(static_cast<Eigen::Index>(row.size()));
    Eigen::Index i = 0;
    for (double r : row) li.row[i++] = r;
    li.rhs = rhs;
    li.group = "lin";
    return li;
}

// maximize a s.t. a <= 3
ConeProgram lp_example() {
    ConeProgram cp = empty_program(1);
    cp.objective[0] = 1.0;
    cp.linear_ineqs.push_back(ineq({1.0}, 3.0));
    return cp;
}

// maximize -t s.t. ||(1,1)|| <= t
ConeProgram norm_example() {
    ConeProgram cp = empty_program(1);
    cp.objective[0] = -1.0;
    SocBlock blk;
    blk.a = Eigen::MatrixXd::Zero(2, 1);
    blk.b = Eigen::Vector2d(1.0, 1.0);
    blk.c = Eigen::RowVectorXd::Ones(1);
    blk.d = 0.0;
    blk.group = "soc";
    cp.soc_blocks.push_back(blk);
    return cp;
}

// maximize a s.t. ||(x1,x2)|| <= 1, a <= x1 + x2;   variables (x1, x2, a)
ConeProgram disk_example() {
    ConeProgram cp = empty_program(3);
    cp.objective[2] = 1.0;
    SocBlock blk;
    blk.a = Eigen::MatrixXd::Zero(2, 3);
    blk.a(0, 0) = 1.0;
    blk.a(1, 1) = 1.0;
    blk.b = Eigen::VectorXd::Zero(2);
    blk.c = Eigen::RowVectorXd::Zero(3);
    blk.d = 1.0;
    blk.group = "disk";
    cp.soc_blocks.push_back(blk);
    cp.linear_ineqs.push_back(ineq({-1.0, -1.0, 1.0}, 0.0));
    return cp;
}

// maximize g'x s.t. ||x - x0|| <= r: optimum g'x0 + r ||g||.
ConeProgram ball_example(const Eigen::VectorXd& g, const Eigen::VectorXd& x0, double r) {
    const Eigen::Index n = g.size();
    ConeProgram cp = empty_program(n);
    cp.objective = g;
    SocBlock blk;
    blk.a = Eigen::MatrixXd::Identity(n, n);
    blk.b = -x0;
    blk.c = Eigen::RowVectorXd::Zero(n);
    blk.d = r;
    blk.group = "ball";
    cp.soc_blocks.push_back(blk);
    return cp;
}

}  // namespace

TEST_SUITE("cone_solver") {

TEST_CASE("analytic examples") {
    const ConeSolution a = solve(lp_example());
    REQUIRE(a.status == SolveStatus::Optimal);
    CHECK(std::abs(a.x[0] - 3.0) <= 1e-7);
    CHECK(std::abs(a.objective_value - 3.0) <= 1e-7);

    const ConeSolution b = solve(norm_example());
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(std::abs(b.x[0] - std::sqrt(2.0)) <= 1e-7);

    const ConeSolution c = solve(disk_example());
    REQUIRE(c.status == SolveStatus::Optimal);
    CHECK(std::abs(c.x[2] - std::sqrt(2.0)) <= 1e-7);
    CHECK(std::abs(c.x[0] - std::sqrt(0.5)) <= 1e-7);
    CHECK(std::abs(c.x[1] - std::sqrt(0.5)) <= 1e-7);

    for (const ConeProgram& cp : {lp_example(), norm_example(), disk_example()}) {
        const ConeSolution s = solve(cp);
        const CertifyReport rep = certify(cp, s);
        CHECK(rep.feasible_within(1e-8));
        CHECK(rep.has_duals);
        CHECK(rep.duality_gap <= 1e-7);
        CHECK(s.kkt_residual <= 1e-8);
    }
}

TEST_CASE("balls of random size and position") {
    std::mt19937_64 rng(20);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> lg(-3.0, 3.0);
    for (int t = 0; t < 40; ++t) {
        const Eigen::Index n = 1 + t % 9;
        Eigen::VectorXd obj(n), x0(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            obj[i] = g(rng) * std::pow(10.0, lg(rng));
            x0[i] = g(rng) * std::pow(10.0, lg(rng));
        }
        const double r = std::pow(10.0, lg(rng));
        const ConeSolution s = solve(ball_example(obj, x0, r));
        REQUIRE(s.status == SolveStatus::Optimal);
        const double expect = obj.dot(x0) + r * obj.norm();
        CHECK(std::abs(s.objective_value - expect) <= 1e-6 * (std::abs(obj.dot(x0)) + r * obj.norm()));
    }
}

TEST_CASE("infeasible and unbounded programs") {
    ConeProgram inf = empty_program(1);
    inf.objective[0] = 1.0;
    inf.linear_ineqs.push_back(ineq({1.0}, -1.0));
    inf.linear_ineqs.push_back(ineq({-1.0}, -1.0));
    CHECK(solve(inf).status == SolveStatus::Infeasible);

    ConeProgram soc_inf = disk_example();
    soc_inf.linear_ineqs.push_back(ineq({-1.0, 0.0, 0.0}, -2.0));  // x1 >= 2 outside the disk
    CHECK(solve(soc_inf).status == SolveStatus::Infeasible);

    ConeProgram unb = empty_program(2);
    unb.objective = Eigen::Vector2d(1.0, 0.0);
    unb.linear_ineqs.push_back(ineq({-1.0, 0.0}, 0.0));
    unb.linear_ineqs.push_back(ineq({0.0, 1.0}, 1.0));
    CHECK(solve(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("iteration limit keeps the best iterate") {
    SolverOptions opts;
    opts.max_iters = 2;
    const ConeSolution s = solve(disk_example(), opts);
    CHECK(s.status == SolveStatus::IterLimit);
    CHECK(s.x.size() == 3);
    CHECK(s.x.allFinite());
    CHECK(s.iterations == 2);
}

TEST_CASE("options validation") {
    SolverOptions o;
    o.tol = 0.0;
    CHECK_THROWS_AS(solve(lp_example(), o), std::invalid_argument);
    o = {};
    o.max_iters = 0;
    CHECK_THROWS_AS(solve(lp_example(), o), std::invalid_argument);
    ConeProgram bad = lp_example();
    bad.objective.resize(2);
    CHECK_THROWS_AS(solve(bad), std::invalid_argument);
}

TEST_CASE("certify flags perturbed points") {
    const ConeProgram cp = disk_example();
    ConeSolution s = solve(cp);
    s.x[0] += 0.1;
    const CertifyReport rep = certify(cp, s);
    CHECK(rep.max_scaled_violation > 1e-8);
    CHECK_FALSE(rep.feasible_within(1e-8));
}

TEST_CASE("objective scaling leaves the maximizer unchanged") {
    for (double lambda : {1e-4, 0.5, 3.0, 1e5}) {
        ConeProgram cp = disk_example();
        const ConeSolution ref = solve(cp);
        cp.objective *= lambda;
        const ConeSolution s = solve(cp);
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK((s.x - ref.x).norm() <= 1e-6);
        CHECK(s.objective_value == doctest::Approx(lambda * ref.objective_value).epsilon(1e-7));
    }
}

TEST_CASE("solves are deterministic") {
    std::mt19937_64 rng(21);
    const ChannelSet ch = oracle::random_channels(rng, 6);
    const PowerBudget pb;
    const AugmentedChannels aug = augment(ch);
    const ConeProgram cp =
        build_subproblem(aug, ch, pb, make_linearization_point(ReflectVector::filled(6, 0.01), aug, pb));
    const ConeSolution a = solve(cp);
    const ConeSolution b = solve(cp);
    CHECK(a.x == b.x);
    CHECK(a.status == b.status);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("subproblem optimum matches a grid search for two elements") {
    std::mt19937_64 rng(22);
    int compared = 0;
    for (int t = 0; t < 6; ++t) {
        RngStream stream(77, static_cast<std::uint64_t>(t));
        const ChannelSet ch = generate_channels({}, {}, 2, stream);
        PowerBudget pb;
        pb.p_a = db_to_linear(70.0 + 5.0 * (t % 3));
        const AugmentedChannels aug = augment(ch);
        const ReflectVector v0 = ReflectVector::filled(2, 0.01);
        if (sinr_eve(v0, aug, pb) < sinr_bob(v0, aug, pb)) continue;
        const LinearizationPoint lp = make_linearization_point(v0, aug, pb);
        const ConeProgram cp = build_subproblem(aug, ch, pb, lp);
        const ConeSolution s = solve(cp);
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(certify(cp, s).feasible_within(1e-8));
        const oracle::GridMax g = oracle::subproblem_grid_max(aug, ch, pb, lp, 41, 60);
        REQUIRE(g.found);
        CHECK(std::abs(s.objective_value - g.value) <= 1e-2 * std::abs(g.value));
        ++compared;
    }
    CHECK(compared >= 3);
}

TEST_CASE("subproblem solutions are certified on scenario channels") {
    for (int t = 0; t < 20; ++t) {
        RngStream stream(5, static_cast<std::uint64_t>(t));
        const int n = 4 + 4 * (t % 5);
        const ChannelSet ch = generate_channels({}, {}, n, stream);
        PowerBudget pb;
        pb.p_a = db_to_linear(60.0 + 5.0 * (t % 7));
        const AugmentedChannels aug = augment(ch);
        const ConeProgram cp = build_subproblem(
            aug, ch, pb, make_linearization_point(ReflectVector::filled(n, 0.01), aug, pb));
        const ConeSolution s = solve(cp);
        CHECK(s.status == SolveStatus::Optimal);
        CHECK(certify(cp, s).feasible_within(1e-8));
    }
}

}
