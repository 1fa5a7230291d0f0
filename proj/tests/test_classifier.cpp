#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "linflow/classifier.hpp"
#include "test_support.hpp"

using namespace linflow;
namespace tt = linflow::testing;

TEST_SUITE("classifier") {

TEST_CASE("classify_aligned: pinned cases from the six-way partition") {
    // Family data.
    auto p = classify_aligned({1.0, 1.0, 0.0});
    CHECK(p.tag == CaseTag::family_blowup);
    CHECK(p.finite_blowup);
    REQUIRE(p.t_max_exact.has_value());
    CHECK(*p.t_max_exact == 1.0);

    p = classify_aligned({2.0, 0.5, family_k(0.5)});
    CHECK(p.tag == CaseTag::family_blowup);
    CHECK(*p.t_max_exact == 1.0);

    CHECK(classify_aligned({1.0, 0.0, 1.0}).tag == CaseTag::family_stationary);
    CHECK(classify_aligned({1.0, -0.5, 0.0}).tag == CaseTag::family_decay);
    // Boundaries are decided by exact arithmetic: family_k(-1/4) is
    // irrational, so its square is one ulp off 5/8 and the data falls in the
    // adjacent open case, never silently onto the family.
    const double k_near = family_k(-0.25);
    const auto near_above = classify_aligned({1.0, -0.25, k_near + 1e-9});
    const auto near_below = classify_aligned({1.0, -0.25, k_near - 1e-9});
    CHECK(near_above.tag == CaseTag::case5);
    CHECK(near_below.tag == CaseTag::case2);

    // Case 2: (1, 0.5, 0.5) with k0^2 = 0.25 < 1 + 0.5 - 0.5 = 1.
    p = classify_aligned({1.0, 0.5, 0.5});
    CHECK(p.tag == CaseTag::case2);
    const auto lc = limit_constants(0.2);
    CHECK(p.limits->first == lc.r_inf);
    CHECK(p.limits->second == lc.k_inf);
    CHECK(p.finite_blowup);

    // Case 1: g < 0 < boundary, e.g. (1, 0.5, 1.2): 1 < 1.44 < 1.5625.
    p = classify_aligned({1.0, 0.5, 1.2});
    CHECK(p.tag == CaseTag::case1);
    CHECK(p.finite_blowup);

    // Case 3 boundary: k0^2 = (r0+2)^2/4 exactly.
    p = classify_aligned({1.0, 1.0, 1.5});
    CHECK(p.tag == CaseTag::case3_boundary);
    CHECK_FALSE(p.finite_blowup);
    CHECK(p.lambda_limit == LambdaLimit::infinity_at_infinite_time);
    CHECK(p.limits->first == 0.0);
    CHECK(p.limits->second == 1.0);

    // Case 4: above the parabola.
    p = classify_aligned({1.0, 1.0, 2.0});
    CHECK(p.tag == CaseTag::case4);
    CHECK(p.limits->first == -2.0);
    CHECK(p.limits->second == 0.0);

    // Case 5: -1/2 <= r0 <= 0 with k0^2 > 1 + r0 - 2 r0^2.
    p = classify_aligned({1.0, -0.25, 1.0});
    CHECK(p.tag == CaseTag::case5);
    CHECK(p.finite_blowup);

    // Case 6: r0 < -1/2, any k.
    CHECK(classify_aligned({1.0, -1.0, 0.0}).tag == CaseTag::case6);
    CHECK(classify_aligned({1.0, -1.0, 3.0}).tag == CaseTag::case6);
    CHECK(classify_aligned({1.0, -2.0, 1.0}).tag == CaseTag::case6);  // frozen r = -2 line

    // Spec'd edge resolutions: r0 = 0 lands in case2/case5 by the k gap;
    // r0 = -1/2 with k > 0 is case5.
    CHECK(classify_aligned({1.0, 0.0, 0.5}).tag == CaseTag::case2);
    CHECK(classify_aligned({1.0, 0.0, 1.5}).tag == CaseTag::case5);
    CHECK(classify_aligned({1.0, -0.5, 0.7}).tag == CaseTag::case5);
    CHECK(classify_aligned({1.0, -0.5, 0.0}).tag == CaseTag::family_decay);

    CHECK_THROWS_AS(classify_aligned({-1.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("partition: exactly one tag, k-sign symmetry, lambda rescaling") {
    auto g = tt::rng(501);
    const std::set<CaseTag> aligned_tags{
        CaseTag::family_blowup, CaseTag::family_stationary, CaseTag::family_decay,
        CaseTag::case1,         CaseTag::case2,             CaseTag::case3_boundary,
        CaseTag::case4,         CaseTag::case5,             CaseTag::case6};
    for (int i = 0; i < 10000; ++i) {
        const double lambda0 = tt::uniform(g, 0.1, 5.0);
        const double r0 = tt::uniform(g, -3.0, 2.0);
        const double k0 = tt::uniform(g, -3.0, 3.0);
        const FatePrediction p = classify_aligned({lambda0, r0, k0});
        CHECK(aligned_tags.count(p.tag) == 1);

        const FatePrediction mirror = classify_aligned({lambda0, r0, -k0});
        CHECK(mirror.tag == p.tag);

        const FatePrediction scaled = classify_aligned({2.0 * lambda0, r0, k0});
        CHECK(scaled.tag == p.tag);
        if (p.t_max_exact)
            CHECK(*scaled.t_max_exact == doctest::Approx(*p.t_max_exact / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("f_poly and g_poly: pinned values, the sum identity, the factorization") {
    CHECK(f_poly(-0.5, 0.0) == -1.5);
    auto g = tt::rng(502);
    for (int i = 0; i < 1000; ++i) {
        const double r = tt::uniform(g, -3.0, 3.0);
        const double m0 = tt::uniform(g, -0.49, 0.49);
        CHECK(f_poly(r, m0) + g_poly(r, m0) ==
              doctest::Approx(3.0 * r).epsilon(1e-12));
        // g factors as -(2 + m0^2)(r - r_star)(r - r_inf).
        const auto lc = limit_constants(m0);
        const double factored = -(2.0 + m0 * m0) * (r - lc.r_star) * (r - lc.r_inf);
        CHECK(g_poly(r, m0) == doctest::Approx(factored).epsilon(1e-12));
        CHECK(g_poly(lc.r_inf, m0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(g_poly(lc.r_star, m0) == doctest::Approx(0.0).epsilon(1e-12));
        // Both roots satisfy g(r, k) = 0 along the line k = m0 (r + 2).
        CHECK(g_defect(lc.r_inf, m0 * (lc.r_inf + 2.0)) ==
              doctest::Approx(0.0).epsilon(1e-12));
        CHECK(g_defect(lc.r_star, m0 * (lc.r_star + 2.0)) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("classify_general: hypothesis predicate and delegation") {
    // Strict hypothesis: diag(-2, 1, 1) -- but that matrix is also exactly
    // aligned (k = 0), so it delegates to the family tag.
    auto p = classify_aligned({1.0, 1.0, 0.0});
    CHECK(p.tag == CaseTag::family_blowup);
    const auto delegated = classify_general(TraceFreeMatrix(Mat3::diag(-2, 1, 1)));
    CHECK(delegated.tag == CaseTag::family_blowup);
    CHECK(delegated.t_max_exact.has_value());

    // Reversed signs: Re(rho1) = Re(rho2) = -1 ties -> outside the hypothesis.
    // (Not aligned: the third strain eigenvalue is negative.)
    CHECK(classify_general(TraceFreeMatrix(Mat3::diag(2, -1, -1))).tag ==
          CaseTag::outside_hypothesis);

    // Random conjugation of the complex block (lambda=1, a=2).
    auto g = tt::rng(503);
    const Mat3 q = tt::random_basis(g);
    Mat3 blk = Mat3::diag(-2, 1, 1);
    blk(1, 2) = 2.0;
    blk(2, 1) = -2.0;
    const TraceFreeMatrix m0 = TraceFreeMatrix::project(q * blk * inverse(q));
    p = classify_general(m0);
    CHECK(p.tag == CaseTag::general_blowup);
    CHECK(p.finite_blowup);
    REQUIRE(p.blowup_profile.has_value());
    // The profile is I - 3 P1: its spectrum is (-2, 1, 1). The repeated pair
    // splits at the sqrt(eps) root-sensitivity scale.
    const auto pev = eigenvalues_tracefree(TraceFreeMatrix::project(*p.blowup_profile));
    CHECK(pev[0].real() == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(pev[2].real() == doctest::Approx(1.0).epsilon(1e-6));

    // Rotated (not axis-aligned) diagonalizable data stays general_blowup.
    const Mat3 rot = tt::random_rotation(g);
    const auto general =
        classify_general(TraceFreeMatrix::project(rot * Mat3::diag(-2, 0.7, 1.3) * transpose(rot)));
    CHECK(general.tag == CaseTag::general_blowup);

    // Defective data carries the exact blowup time 1/lambda.
    Mat3 def = Mat3::diag(-2, 1, 1);
    def(1, 2) = 1.0;
    const auto defective = classify_general(TraceFreeMatrix::project(q * def * inverse(q)));
    CHECK(defective.tag == CaseTag::general_blowup);
    REQUIRE(defective.t_max_exact.has_value());
    CHECK(*defective.t_max_exact == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("case_boundary_distance: zero on boundaries, positive inside") {
    CHECK(case_boundary_distance(0.5, family_k(0.5)) <= 1e-15);      // g = 0
    CHECK(case_boundary_distance(1.0, 1.5) <= 1e-15);                // parabola
    CHECK(case_boundary_distance(0.0, 2.0) <= 1e-15);                // r = 0 line
    CHECK(case_boundary_distance(-0.5, 1.7) <= 1e-15);               // r = -1/2 line
    CHECK(case_boundary_distance(0.5, 0.25) > 1e-2);
    CHECK(case_boundary_distance(1.25, 2.5) > 1e-2);
}

TEST_CASE("verify_prediction: representative aligned fates") {
    // Stationary data is verified as constant.
    const AlignedParams stat{1.0, 0.0, 1.0};
    auto pred = classify_aligned(stat);
    auto traj = integrate_params(stat, verification_config(pred, stat.lambda));
    auto rep = verify_prediction(pred, traj, 2e-2);
    CHECK(rep.passed);
    CHECK_FALSE(rep.inconclusive);

    // Family blowup: limits and the exact t_max.
    const AlignedParams fam{1.0, 1.0, 0.0};
    pred = classify_aligned(fam);
    traj = integrate_params(fam, verification_config(pred, fam.lambda));
    rep = verify_prediction(pred, traj, 1e-3);
    CHECK(rep.passed);

    // Case 2 toward (r_inf, k_inf).
    const AlignedParams c2{1.0, 0.5, 0.5};
    pred = classify_aligned(c2);
    traj = integrate_params(c2, verification_config(pred, c2.lambda));
    rep = verify_prediction(pred, traj, 2e-2);
    CHECK(rep.passed);

    // Case 5 toward (-2, 0).
    const AlignedParams c5{1.0, -0.25, 1.0};
    pred = classify_aligned(c5);
    traj = integrate_params(c5, verification_config(pred, c5.lambda));
    rep = verify_prediction(pred, traj, 2e-2);
    CHECK(rep.passed);

    // Family decay: lambda * t * (-r) -> 1.
    const AlignedParams dec{1.0, -0.5, 0.0};
    pred = classify_aligned(dec);
    REQUIRE(pred.tag == CaseTag::family_decay);
    traj = integrate_params(dec, verification_config(pred, dec.lambda));
    rep = verify_prediction(pred, traj, 2e-2);
    CHECK(rep.passed);

    // A wrong prediction fails instead of passing vacuously.
    FatePrediction wrong = classify_aligned(c2);
    wrong.limits = std::make_pair(0.0, 0.0);
    traj = integrate_params(c2, verification_config(wrong, c2.lambda));
    rep = verify_prediction(wrong, traj, 2e-2);
    CHECK_FALSE(rep.passed);
}

TEST_CASE("verify_prediction: case-3 boundary observes growth without blowup") {
    const AlignedParams b{1.0, 0.5, 1.25};
    const auto pred = classify_aligned(b);
    REQUIRE(pred.tag == CaseTag::case3_boundary);
    const auto traj = integrate_params(b, verification_config(pred, b.lambda));
    CHECK(traj.termination.kind == TerminationKind::horizon_reached);
    const auto rep = verify_prediction(pred, traj, 2e-2);
    CHECK(rep.passed);
    CHECK_FALSE(rep.inconclusive);
}

TEST_CASE("verify_prediction: step underflow yields an inconclusive report") {
    const AlignedParams c2{1.0, 0.5, 0.5};
    const auto pred = classify_aligned(c2);
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.blowup_norm_threshold = 1e300;  // unreachable: the run dies in underflow
    const auto traj = integrate_params(c2, cfg);
    REQUIRE(traj.termination.kind == TerminationKind::step_underflow);
    const auto rep = verify_prediction(pred, traj, 2e-2);
    CHECK(rep.inconclusive);

    // An honest horizon miss is a conclusive failure, not an excuse.
    SolverConfig early;
    early.t_end = 0.05;
    const auto short_run = integrate_params(c2, early);
    const auto miss = verify_prediction(pred, short_run, 2e-2);
    CHECK_FALSE(miss.passed);
    CHECK_FALSE(miss.inconclusive);
}

TEST_CASE("verify_prediction: general blowup profile on a matrix trajectory") {
    auto g = tt::rng(504);
    const Mat3 q = tt::random_basis(g);
    const TraceFreeMatrix m0 =
        TraceFreeMatrix::project(q * Mat3::diag(-1.5, 0.4, 1.1) * inverse(q));
    const auto pred = classify_general(m0);
    REQUIRE(pred.tag == CaseTag::general_blowup);
    SolverConfig cfg;
    cfg.t_end = 100.0;
    cfg.blowup_norm_threshold = 1e6;
    const auto traj = integrate_matrix(m0, cfg);
    const auto rep = verify_prediction(pred, traj, 5e-2);
    CHECK(rep.passed);
    CHECK_FALSE(rep.inconclusive);
}

}  // TEST_SUITE
