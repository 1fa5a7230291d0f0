#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "linflow/closed_forms.hpp"
#include "linflow/dynamics.hpp"
#include "test_support.hpp"

using namespace linflow;

TEST_SUITE("closed_forms") {

TEST_CASE("family_k: endpoints and interior") {
    CHECK(family_k(1.0) == 0.0);
    CHECK(family_k(-0.5) == 0.0);
    CHECK(family_k(0.0) == 1.0);
    CHECK(family_k(0.5) == doctest::Approx(1.0).epsilon(1e-15));  // 1 + 1/2 - 1/2
    CHECK_THROWS_AS(family_k(1.0 + 1e-6), std::domain_error);
    CHECK_THROWS_AS(family_k(-0.5 - 1e-6), std::domain_error);
}

TEST_CASE("family_state: lambda(t) = lambda0 / (1 - r lambda0 t)") {
    const FamilySolution blow(1.0, 1.0);
    CHECK(blow.t_max().has_value());
    CHECK(*blow.t_max() == 1.0);
    CHECK(blow.lambda_at(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(blow.lambda_at(1.0), std::domain_error);
    CHECK_THROWS_AS(blow.lambda_at(-0.1), std::domain_error);

    const FamilySolution stat(2.0, 0.0);
    CHECK_FALSE(stat.t_max().has_value());
    CHECK(stat.lambda_at(123.0) == 2.0);

    const FamilySolution decay(1.0, -0.5);
    CHECK_FALSE(decay.t_max().has_value());
    CHECK(decay.lambda_at(2.0) == doctest::Approx(0.5).epsilon(1e-15));

    // d(lambda)/dt = r lambda^2 by finite differences.
    const double h = 1e-6;
    const double fd = (blow.lambda_at(0.5 + h) - blow.lambda_at(0.5 - h)) / (2 * h);
    CHECK(fd == doctest::Approx(blow.dlambda_at(0.5)).epsilon(1e-9));
}

TEST_CASE("family_state cross-checked by numerical integration (r = -1/2)") {
    const FamilySolution decay(1.0, -0.5);
    SolverConfig cfg;
    cfg.t_end = 10.0;
    cfg.sample_times = {2.0, 10.0};
    const auto traj = integrate_params({1.0, -0.5, 0.0}, cfg);
    for (double t : cfg.sample_times) {
        const auto idx = traj.index_at_time(t);
        REQUIRE(idx.has_value());
        CHECK(traj.states[*idx].lambda ==
              doctest::Approx(decay.lambda_at(t)).epsilon(1e-8));
    }
}

TEST_CASE("g_defect values") {
    CHECK(g_defect(1.0, 0.0) == 0.0);
    CHECK(g_defect(0.0, 0.0) == 1.0);
    CHECK(g_defect(0.0, 1.0) == 0.0);
}

TEST_CASE("limit_constants: pinned endpoints and the g-root identity") {
    const auto mid = limit_constants(0.0);
    CHECK(mid.r_inf == 1.0);
    CHECK(mid.k_inf == 0.0);
    CHECK(mid.r_star == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK_FALSE(mid.at_boundary);

    const auto edge = limit_constants(0.5);
    CHECK(edge.r_inf == 0.0);
    CHECK(edge.k_inf == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(edge.at_boundary);
    const auto edge_n = limit_constants(-0.5);
    CHECK(edge_n.k_inf == doctest::Approx(-1.0).epsilon(1e-15));

    CHECK_THROWS_AS(limit_constants(0.5 + 1e-9), std::domain_error);

    // k_inf^2 = 1 + r_inf - 2 r_inf^2 and r_star < r_inf across the domain.
    for (int i = 0; i <= 1000; ++i) {
        const double m0 = -0.4995 + 0.999 * i / 1000.0;
        const auto lc = limit_constants(m0);
        CHECK(lc.k_inf * lc.k_inf ==
              doctest::Approx(1.0 + lc.r_inf - 2.0 * lc.r_inf * lc.r_inf).epsilon(1e-12));
        CHECK(lc.r_star < lc.r_inf);
        CHECK(lc.r_star > -2.0);
    }
}

TEST_CASE("limit_constants(0.2) against the long-time integration oracle") {
    // m0 = 0.2 corresponds to (r0, k0) = (0.5, 0.5).
    const auto lc = limit_constants(0.2);
    CHECK(lc.r_inf == doctest::Approx(0.87979054337585877).epsilon(1e-14));
    CHECK(lc.k_inf == doctest::Approx(0.57595810867517181).epsilon(1e-14));

    SolverConfig cfg;
    cfg.abs_tol = 1e-100;
    cfg.t_end = 100.0;
    cfg.blowup_norm_threshold = 1e7;  // lambda well past 1e6
    const auto traj = integrate_params({1.0, 0.5, 0.5}, cfg);
    REQUIRE(traj.termination.kind == TerminationKind::blowup);
    CHECK(traj.states.back().r() == doctest::Approx(lc.r_inf).epsilon(1e-2));
    CHECK(traj.states.back().k == doctest::Approx(lc.k_inf).epsilon(1e-2));
}

TEST_CASE("defective_closed_form: pinned values and its ODE system") {
    const auto at0 = defective_closed_form(1.0, 0.0);
    CHECK(at0.lambda == 1.0);
    CHECK(at0.offdiag == 1.0);
    const auto mid = defective_closed_form(1.0, 0.5);
    CHECK(mid.lambda == 2.0);
    CHECK(mid.offdiag == 0.25);
    const auto other = defective_closed_form(2.0, 0.25);
    CHECK(other.lambda == 4.0);
    CHECK(other.offdiag == 0.25);
    CHECK_THROWS_AS(defective_closed_form(1.0, 1.0), std::domain_error);

    // Analytic derivatives: lambda' = lambda0^2/(1-lambda0 t)^2 = lambda^2 and
    // off' = -2 lambda0 (1 - lambda0 t) = -2 lambda off.
    for (double t : {0.0, 0.2, 0.5, 0.6}) {  // domain is [0, 2/3)
        const double lambda0 = 1.5;
        const double u = 1.0 - lambda0 * t;
        const auto s = defective_closed_form(lambda0, t);
        const double dlambda = lambda0 * lambda0 / (u * u);
        const double doff = -2.0 * lambda0 * u;
        CHECK(std::abs(dlambda - s.lambda * s.lambda) <= 1e-12 * dlambda);
        CHECK(std::abs(doff + 2.0 * s.lambda * s.offdiag) <= 1e-12 * std::abs(doff));
    }
}

TEST_CASE("defective_closed_form cross-checked by matrix integration") {
    Mat3 j0 = Mat3::diag(-2.0 * 2.0, 2.0, 2.0);
    j0(1, 2) = 1.0;
    SolverConfig cfg;
    cfg.t_end = 0.3;
    cfg.sample_times = {0.25};
    const auto traj = integrate_matrix(TraceFreeMatrix(j0), cfg);
    const auto idx = traj.index_at_time(0.25);
    REQUIRE(idx.has_value());
    const auto exact = defective_closed_form(2.0, 0.25);
    CHECK(traj.states[*idx](1, 1) == doctest::Approx(exact.lambda).epsilon(1e-9));
    CHECK(traj.states[*idx](1, 2) == doctest::Approx(exact.offdiag).epsilon(1e-9));
}

TEST_CASE("boundary_invariant: pinned values, conservation identity, domain") {
    CHECK(boundary_invariant(1.0, 1.0) == doctest::Approx(std::cbrt(3.0)).epsilon(1e-15));
    CHECK(boundary_invariant(2.0, 1.0) ==
          doctest::Approx(2.0 * std::cbrt(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(boundary_invariant(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(boundary_invariant(1.0, -1.0), std::domain_error);

    // d/dt log c = dlambda/lambda + (2/3) dr/r + (1/3) dr/(r+2) vanishes
    // identically under the m0^2 = 1/4 reduced system.
    for (double r : {0.2, 0.7, 1.3, 2.5}) {
        const double lambda = 1.7;
        const double k_sq = 0.25 * (r + 2.0) * (r + 2.0);
        const double dl = (1.0 / 3.0) * (-1.0 + 2.0 * r + 2.0 * r * r + k_sq) * lambda * lambda;
        const double dr = -(3.0 / 4.0) * lambda * (r + 2.0) * r * r;
        const double dlog =
            dl / lambda + (2.0 / 3.0) * dr / r + (1.0 / 3.0) * dr / (r + 2.0);
        CHECK(std::abs(dlog) <= 1e-12 * lambda);
    }
}

TEST_CASE("boundary_invariant is conserved along an integrated boundary trajectory") {
    SolverConfig cfg;
    cfg.abs_tol = 1e-100;
    cfg.t_end = 10.0;
    const auto traj = integrate_params({1.0, 1.0, 1.5}, cfg);  // m0 = 1/2
    REQUIRE(traj.termination.kind == TerminationKind::horizon_reached);
    const double c0 = boundary_invariant(1.0, 1.0);
    for (const ParamState& s : traj.states)
        CHECK(boundary_invariant(s.lambda, s.r()) == doctest::Approx(c0).epsilon(1e-8));
}

TEST_CASE("boundary_r_bounds: degenerate t, pinned points, enclosure") {
    const auto at0 = boundary_r_bounds(1.0, 1.0, 0.0);
    CHECK(at0.lower == 1.0);
    CHECK(at0.upper == 1.0);

    // At t* = 4 / (2^(2/3) c0) the upper bracket is exactly r0/8.
    const double c0 = boundary_invariant(1.0, 1.0);
    const double t_star = 4.0 / (std::pow(2.0, 2.0 / 3.0) * c0);
    CHECK(boundary_r_bounds(1.0, 1.0, t_star).upper == doctest::Approx(0.125).epsilon(1e-14));
    // Same structure for the lower bracket with (r0+2)^(2/3).
    const double t_star_lo = 4.0 / (std::pow(3.0, 2.0 / 3.0) * c0);
    CHECK(boundary_r_bounds(1.0, 1.0, t_star_lo).lower ==
          doctest::Approx(0.125).epsilon(1e-14));

    for (double t : {0.5, 1.0, 5.0, 40.0}) {
        const auto br = boundary_r_bounds(1.0, 1.0, t);
        CHECK(br.lower < br.upper);
    }
    // Both bounds decay to zero.
    CHECK(boundary_r_bounds(1.0, 1.0, 1e9).upper <= 1e-15);

    SolverConfig cfg;
    cfg.abs_tol = 1e-100;
    cfg.t_end = 10.0;
    cfg.sample_times = {1.0, 5.0, 10.0};
    const auto traj = integrate_params({1.0, 1.0, 1.5}, cfg);
    for (double t : cfg.sample_times) {
        const auto idx = traj.index_at_time(t);
        REQUIRE(idx.has_value());
        const auto br = boundary_r_bounds(1.0, 1.0, t);
        const double r_t = traj.states[*idx].r();
        CHECK(br.lower < r_t);
        CHECK(r_t < br.upper);
    }
}

TEST_CASE("lambda_asymptotic_check: synthetic, family, complex-pair") {
    // Exact synthetic data lambda = 1/(1-t), T = 1.
    std::vector<double> ts, ls;
    for (int i = 0; i < 200; ++i) {
        const double t = 0.995 * i / 199.0;
        ts.push_back(t);
        ls.push_back(1.0 / (1.0 - t));
    }
    CHECK(lambda_asymptotic_check(ts, ls, 1.0) <= 1e-12);

    // Family data: (T - t) lambda = 1 identically; numerical tolerance 1e-3.
    SolverConfig cfg;
    cfg.t_end = 2.0;
    const auto fam = integrate_params({1.0, 1.0, 0.0}, cfg);
    REQUIRE(fam.termination.kind == TerminationKind::blowup);
    CHECK(lambda_asymptotic_check(fam, fam.termination.blowup->t_max) <= 1e-3);

    // Complex pair (lambda0=1, a0=1): residual <= 5e-2 once lambda >= 1e6.
    SolverConfig ccfg;
    ccfg.t_end = 2.0;
    ccfg.abs_tol = 1e-100;
    const auto cplx = integrate_complex_params(1.0, 1.0, ccfg);
    REQUIRE(cplx.termination.kind == TerminationKind::blowup);
    CHECK(lambda_asymptotic_check(cplx, cplx.termination.blowup->t_max) <= 5e-2);

    // Requires blowup termination.
    SolverConfig scfg;
    scfg.t_end = 1.0;
    const auto stat = integrate_params({1.0, 0.0, 1.0}, scfg);
    CHECK_THROWS_AS(lambda_asymptotic_check(stat, 1.0), std::runtime_error);
}

TEST_CASE("family residual property: analytic derivative solves the pair equation") {
    for (int i = 0; i <= 150; ++i) {
        const double r = -0.5 + 1.5 * i / 150.0;
        const FamilySolution fam(1.0, r);
        const double t_hi = fam.t_max() ? 0.9 * *fam.t_max() : 5.0;
        for (double frac : {0.0, 0.5, 1.0}) {
            const double t = frac * t_hi;
            const double dl = fam.dlambda_at(t);
            const SymMat3 ds = SymMat3::diag(-(1.0 + r) * dl, r * dl, dl);
            const Vec3 dw{0.0, 2.0 * fam.k() * dl, 0.0};
            const auto res = pair_residual(fam.pair_at(t), ds, dw);
            const double scale = 1.0 + fam.lambda_at(t) * fam.lambda_at(t);
            CHECK(frobenius_norm(res.strain) <= 1e-10 * scale);
            CHECK(norm(res.vorticity) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("family decay rate: lambda(t) * t -> -1/r for r < 0") {
    const FamilySolution decay(1.0, -0.25);
    const double t = 1e5;  // convergence rate is 1/(|r| lambda0 t)
    CHECK(decay.lambda_at(t) * t == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("aligned accessors: eigenvalue ordering on the family range") {
    const AlignedParams p{2.0, 0.5, 1.0};
    CHECK(p.lambda1() == -3.0);
    CHECK(p.lambda2() == 1.0);
    CHECK(p.lambda3() == 2.0);
    CHECK(p.lambda1() <= p.lambda2());
    CHECK(p.lambda2() <= p.lambda3());
    CHECK(p.m0().has_value());
    CHECK(*p.m0() == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_FALSE(AlignedParams(1.0, -2.0, 1.0).m0().has_value());
    CHECK_THROWS_AS(AlignedParams(0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(AlignedParams(-1.0, 1.0, 0.0), std::domain_error);
}

}  // TEST_SUITE
