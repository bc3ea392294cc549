#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "surveil/element_geometry.hpp"

using namespace surveil;

namespace {

std::vector<cplx> random_phi(std::mt19937_64& rng, const ChannelSet& ch, const PowerBudget& pb,
                             double frac) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> phi(static_cast<std::size_t>(ch.n_r()));
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double r = frac * std::sqrt(pb.amplitude_budget(ch.h_ar[static_cast<Eigen::Index>(i)]));
        phi[i] = std::polar(r * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
    }
    return phi;
}

ReflectVector to_vector(const std::vector<cplx>& phi) {
    ReflectVector v(static_cast<Eigen::Index>(phi.size()));
    for (std::size_t i = 0; i < phi.size(); ++i) v.set_phi(static_cast<Eigen::Index>(i), phi[i]);
    return v;
}

void check_against_grid(const ElementCoefficients& ec) {
    const CaseOutcome out = solve_surrogate(ec);
    CHECK(std::norm(out.phi) <= ec.beta_up * (1.0 + 1e-9));
    const oracle::GridMax g = oracle::element_grid_max(ec);
    if (!out.region_nonempty) {
        CHECK_FALSE(g.found);
        return;
    }
    REQUIRE(g.found);
    CHECK(ec.c3_margin(out.phi) >= -1e-9 * (std::abs(ec.eve(out.phi)) + std::abs(ec.bob(out.phi))));
    CHECK(std::abs(ec.bob(out.phi) - g.value) <= 1e-3 * std::abs(g.value));
}

}  // namespace

TEST_SUITE("element_geometry") {

TEST_CASE("partial channels") {
    std::mt19937_64 rng(50);
    const ChannelSet ch = oracle::random_channels(rng, 4);
    const PowerBudget pb;
    const PartialChannels none = partial_channels(2, ReflectVector(4), ch);
    CHECK(none.h_ab_not_n == ch.h_ab);
    CHECK(none.h_ae_not_n == ch.h_ae);
    CHECK(none.h_rb_not_n == 0.0);
    CHECK(none.h_re_not_n == 0.0);

    const ChannelSet one = oracle::random_channels(rng, 1);
    const PartialChannels p1 = partial_channels(0, ReflectVector::filled(1, {3.0, 1.0}), one);
    CHECK(p1.h_ab_not_n == one.h_ab);
    CHECK(p1.h_rb_not_n == 0.0);

    for (int t = 0; t < 50; ++t) {
        const auto phi = random_phi(rng, ch, pb, 1.0);
        const ReflectVector v = to_vector(phi);
        const Eigen::Index n = t % 4;
        const PartialChannels pc = partial_channels(n, v, ch);
        const cplx total = pc.h_ab_not_n + ch.h_ar[n] * ch.h_rb[n] * v.phi(n);
        const double num = oracle::sinr_bob(phi, ch, pb) *
                           (pb.sigma_r2 * (pc.h_rb_not_n + std::norm(ch.h_rb[n] * v.phi(n))) + pb.sigma_02) /
                           pb.p_a;
        CHECK(std::abs(std::norm(total) - num) <= 1e-12 * num);
    }
    CHECK_THROWS_AS(partial_channels(4, ReflectVector(4), ch), std::out_of_range);
}

TEST_CASE("coefficient special cases") {
    std::mt19937_64 rng(51);
    ChannelSet ch = oracle::random_channels(rng, 3);
    const PowerBudget pb;
    ch.h_rb[1] = 0.0;
    const ElementCoefficients z =
        element_coefficients(1, partial_channels(1, ReflectVector::filled(3, 0.5), ch), ch, pb);
    CHECK(z.j == 0.0);
    CHECK(z.l == 0.0);
    CHECK(z.m == 0.0);

    ChannelSet mirror = oracle::random_channels(rng, 3);
    mirror.h_ae = mirror.h_ab;
    mirror.h_re = mirror.h_rb;
    PowerBudget nobudget = pb;
    nobudget.p_max = 0.0;
    const ElementCoefficients ec =
        element_coefficients(0, partial_channels(0, ReflectVector::filled(3, 0.5), mirror), mirror, nobudget);
    CHECK(ec.beta_up == 0.0);
    CHECK(std::abs(ec.n - ec.j) <= kDegenerateNj);
    CHECK(solve_surrogate(ec).case_id == ElementCase::NjZeroHalfPlane);

    ChannelSet live = oracle::random_channels(rng, 2);
    const ElementCoefficients ok = element_coefficients(0, partial_channels(0, ReflectVector(2), live), live, pb);
    CHECK(ok.j > 0.0);
    CHECK(ok.beta_up > 0.0);
    CHECK(ok.s == doctest::Approx(-ok.l / (2 * ok.j)));
    const double nj = ok.n - ok.j;
    CHECK(ok.z == doctest::Approx((ok.k - ok.o) / nj + (ok.p - ok.l) * (ok.p - ok.l) / (4 * nj * nj) +
                                  (ok.q - ok.m) * (ok.q - ok.m) / (4 * nj * nj)));
}

TEST_CASE("quadratic forms reproduce the worst-case surrogates") {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 100; ++t) {
        const int nr = 1 + t % 8;
        const ChannelSet ch = oracle::random_channels(rng, nr);
        PowerBudget pb;
        pb.p_a = std::pow(10.0, 6.0 + 0.03 * t);
        const auto phi = random_phi(rng, ch, pb, 1.0);
        const ReflectVector v = to_vector(phi);
        const std::size_t n = static_cast<std::size_t>(t % nr);
        const auto ni = static_cast<Eigen::Index>(n);
        const ElementCoefficients ec = element_coefficients(ni, partial_channels(ni, v, ch), ch, pb);
        for (int s = 0; s < 20; ++s) {
            const cplx p = random_phi(rng, ch, pb, 1.0)[n];
            const double sb = oracle::surrogate_bob(n, p, phi, ch, pb);
            const double se = oracle::surrogate_eve(n, p, phi, ch, pb);
            CHECK(std::abs(ec.bob(p) - sb) <= 1e-10 * sb);
            CHECK(std::abs(ec.eve(p) - se) <= 1e-10 * se);
            std::vector<cplx> full = phi;
            full[n] = p;
            CHECK(se <= oracle::sinr_eve(full, ch, pb) * (1.0 + 1e-12));
            CHECK(sb >= oracle::sinr_bob(full, ch, pb) * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("gamma") {
    ElementCoefficients ec = oracle::make_geometry(1.0, {-1.0, 0.0}, 0.0, 1.0, {5.0, 5.0}, -1.0, 4.0);
    CHECK(std::abs(candidate_gamma(ec) - cplx{2.0, 0.0}) < 1e-15);
    ElementCoefficients centered = oracle::make_geometry(1.0, {0.0, 0.0}, 0.0, 1.0, {5.0, 5.0}, -1.0, 9.0);
    CHECK(candidate_gamma(centered) == cplx{3.0, 0.0});

    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        const ElementCoefficients r = oracle::branch_instance(rng, ElementCase::NjPosOverlap, false);
        const cplx g = candidate_gamma(r);
        CHECK(std::abs(std::norm(g) - r.beta_up) <= 1e-12 * r.beta_up);
        const cplx st{r.s, r.t};
        double best = 0.0;
        for (int s = 0; s < 100000; ++s) {
            const cplx p = std::polar(std::sqrt(r.beta_up * u(rng)), 2.0 * M_PI * u(rng));
            best = std::max(best, std::abs(p - st));
        }
        CHECK(std::abs(g - st) >= best);
    }
}

TEST_CASE("eta") {
    ElementCoefficients same = oracle::make_geometry(1.0, {2.0, 1.0}, 0.0, -1.0, {2.0, 1.0}, 4.0, 100.0);
    REQUIRE(candidate_eta(same).has_value());
    CHECK(std::abs(*candidate_eta(same) - cplx{4.0, 1.0}) < 1e-12);

    ElementCoefficients col = oracle::make_geometry(1.0, {0.0, 0.0}, 0.0, -1.0, {3.0, 0.0}, 1.0, 100.0);
    CHECK(std::abs(*candidate_eta(col) - cplx{4.0, 0.0}) < 1e-12);

    ElementCoefficients none = oracle::make_geometry(1.0, {0.0, 0.0}, 0.0, -1.0, {3.0, 0.0}, -1.0, 1.0);
    CHECK_FALSE(candidate_eta(none).has_value());

    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        const ElementCoefficients r = oracle::branch_instance(rng, ElementCase::NjNegOverlap, false);
        const cplx e = *candidate_eta(r);
        const cplx c{r.u, r.w};
        CHECK(std::abs(std::norm(e - c) - r.z) <= 1e-12 * r.z + 1e-12 * std::norm(c));
        double best = 0.0;
        for (int s = 0; s < 100000; ++s) {
            const cplx p = c + std::polar(std::sqrt(r.z * u(rng)), 2.0 * M_PI * u(rng));
            best = std::max(best, std::abs(p - cplx{r.s, r.t}));
        }
        CHECK(std::abs(e - cplx{r.s, r.t}) >= best * (1.0 - 1e-12));
    }
}

TEST_CASE("circle intersections") {
    const auto classic = intersect_circles({0.0, 0.0}, 1.0, {1.0, 0.0}, 1.0);
    REQUIRE(classic.has_value());
    CHECK(std::abs(classic->first - cplx{0.5, std::sqrt(3.0) / 2}) < 1e-15);
    CHECK(std::abs(classic->second - cplx{0.5, -std::sqrt(3.0) / 2}) < 1e-15);

    const auto tangent = intersect_circles({0.0, 0.0}, 2.0, {3.0, 0.0}, 1.0);
    REQUIRE(tangent.has_value());
    CHECK(std::abs(tangent->first - cplx{2.0, 0.0}) < 1e-12);
    CHECK(std::abs(tangent->first - tangent->second) < 1e-12);

    CHECK_FALSE(intersect_circles({0.0, 0.0}, 1.0, {3.0, 0.0}, 1.0).has_value());
    CHECK_FALSE(intersect_circles({0.0, 0.0}, 3.0, {0.5, 0.0}, 1.0).has_value());

    ElementCoefficients ec = oracle::make_geometry(1.0, {0.0, 0.0}, 0.0, 1.0, {1.0, 0.0}, 1.0, 1.0);
    const auto from_ec = circle_intersections(ec);
    REQUIRE(from_ec.has_value());
    CHECK(std::abs(from_ec->first.real() - 0.5) < 1e-15);

    std::mt19937_64 rng(55);
    for (int t = 0; t < 200; ++t) {
        const ElementCoefficients r =
            oracle::branch_instance(rng, t % 2 ? ElementCase::NjPosOverlap : ElementCase::NjNegOverlap, false);
        const auto eps = circle_intersections(r);
        REQUIRE(eps.has_value());
        for (cplx e : {eps->first, eps->second}) {
            CHECK(std::abs(std::norm(e) - r.beta_up) <= 1e-9);
            CHECK(std::abs(std::norm(e - cplx{r.u, r.w}) - r.z) <= 1e-9);
        }
    }
}

TEST_CASE("line and circle") {
    const auto cut = intersect_line_circle(1.0, 0.0, 0.5, 1.0);
    REQUIRE(cut.has_value());
    CHECK(std::abs(cut->first - cplx{0.5, std::sqrt(0.75)}) < 1e-15);
    CHECK_FALSE(intersect_line_circle(1.0, 0.0, 2.0, 1.0).has_value());
    CHECK_FALSE(intersect_line_circle(0.0, 0.0, 0.0, 1.0).has_value());
}

TEST_CASE("named branches") {
    // Constraint satisfied everywhere.
    const ElementCoefficients a = oracle::make_geometry(1.0, {-1.0, 0.0}, 1.0, 2.0, {0.5, 0.0}, -1.0, 4.0);
    const CaseOutcome oa = solve_surrogate(a);
    CHECK(oa.case_id == ElementCase::NjPosZNonPos);
    CHECK(std::abs(oa.phi - cplx{2.0, 0.0}) < 1e-12);

    // Budget disk inside the excluded disk.
    const ElementCoefficients b = oracle::make_geometry(1.0, {-1.0, 0.0}, 1.0, 2.0, {0.5, 0.0}, 16.0, 1.0);
    const CaseOutcome ob = solve_surrogate(b);
    CHECK(ob.case_id == ElementCase::NjPosEnclosed);
    CHECK_FALSE(ob.region_nonempty);
    CHECK(ob.phi == cplx{0.0, 0.0});

    // Allowed set empty.
    const ElementCoefficients c = oracle::make_geometry(1.0, {-1.0, 0.0}, 1.0, -2.0, {0.5, 0.0}, -1.0, 1.0);
    const CaseOutcome oc = solve_surrogate(c);
    CHECK(oc.case_id == ElementCase::NjNegZNonPos);
    CHECK(oc.phi == cplx{0.0, 0.0});

    // Allowed disk inside the budget: eta.
    const ElementCoefficients d = oracle::make_geometry(1.0, {0.0, 0.0}, 1.0, -2.0, {3.0, 0.0}, 1.0, 100.0);
    const CaseOutcome od = solve_surrogate(d);
    CHECK(od.case_id == ElementCase::NjNegContained);
    CHECK(std::abs(od.phi - cplx{4.0, 0.0}) < 1e-12);
}

TEST_CASE("every branch matches the grid oracle") {
    std::mt19937_64 rng(56);
    std::set<ElementCase> seen;
    for (int c = 0; c < kElementCaseCount; ++c) {
        const auto target = static_cast<ElementCase>(c);
        for (int rep = 0; rep < 3; ++rep) {
            const ElementCoefficients ec = oracle::branch_instance(rng, target, rep == 2);
            const CaseOutcome out = solve_surrogate(ec);
            CHECK(out.case_id == target);
            CHECK(out.linear_objective == (rep == 2));
            seen.insert(out.case_id);
            check_against_grid(ec);
        }
    }
    CHECK(seen.size() == static_cast<std::size_t>(kElementCaseCount));
}

TEST_CASE("scenario elements match the grid oracle") {
    std::mt19937_64 rng(57);
    for (int t = 0; t < 20; ++t) {
        RngStream s(58, static_cast<std::uint64_t>(t));
        const ChannelSet ch = generate_channels({}, {}, 6, s);
        PowerBudget pb;
        pb.p_a = db_to_linear(60.0 + 5.0 * (t % 7));
        const ReflectVector v = to_vector(random_phi(rng, ch, pb, 1.0));
        check_against_grid(element_coefficients(t % 6, partial_channels(t % 6, v, ch), ch, pb));
    }
}

TEST_CASE("flat objective") {
    const ElementCoefficients ec = oracle::make_geometry_lm(0.0, 0.0, 0.0, 1.0, 1.0, {0.0, 0.0}, -1.0, 4.0);
    const CaseOutcome out = solve_surrogate(ec);
    CHECK(out.linear_objective);
    CHECK(out.region_nonempty);
    CHECK(std::norm(out.phi) <= 4.0 * (1.0 + 1e-12));
    CHECK(ec.bob(out.phi) == doctest::Approx(1.0));
}

TEST_CASE("coordinate descent") {
    std::mt19937_64 rng(59);
    ChannelSet zero = oracle::random_channels(rng, 5);
    zero.h_rb.setZero();
    zero.h_re.setZero();
    const PowerBudget pb;
    const CoordinateDescentResult none = coordinate_descent(zero, pb);
    CHECK(none.v.augmented() == ReflectVector(5).augmented());

    const ChannelSet one = oracle::random_channels(rng, 1);
    const CoordinateDescentResult single = coordinate_descent(one, pb, 1);
    CHECK(single.v.phi(0) == solve_element(0, ReflectVector::filled(1, 0.01), one, pb).phi);
    CHECK(single.cases.size() == 1);

    CHECK_THROWS_AS(coordinate_descent(one, pb, 0), std::invalid_argument);

    int updates = 0;
    for (int t = 0; t < 20; ++t) {
        RngStream s(60, static_cast<std::uint64_t>(t));
        const ChannelSet ch = generate_channels({}, {}, 10, s);
        PowerBudget p;
        p.p_a = db_to_linear(60.0 + 5.0 * (t % 7));
        const AugmentedChannels aug = augment(ch);
        const CoordinateDescentResult r = coordinate_descent(
            ch, p, 3, {0.01, 0.0}, [&](Eigen::Index n, const CaseOutcome& out, const ReflectVector& v) {
                CHECK(std::norm(v.phi(n)) <= p.amplitude_budget(ch.h_ar[n]) * (1.0 + 1e-9));
                if (out.region_nonempty && out.phi != cplx{0.0, 0.0}) {
                    ++updates;
                    CHECK(sinr_eve(v, aug, p) >= sinr_bob(v, aug, p) * (1.0 - 1e-9));
                }
            });
        CHECK(r.cases.size() == 30);
    }
    CHECK(updates > 0);
}

}
