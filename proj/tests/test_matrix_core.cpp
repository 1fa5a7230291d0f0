#include <doctest.h>

#include <stdexcept>

#include "linflow/closed_forms.hpp"
#include "linflow/state.hpp"
#include "test_support.hpp"

using namespace linflow;
namespace tt = linflow::testing;

namespace {

// The invariant-family matrix lambda * [[-(1+r),0,k],[0,r,0],[-k,0,1]].
Mat3 family_mat(double lambda, double r, double k) {
    Mat3 m = Mat3::diag(-(1.0 + r), r, 1.0);
    m(0, 2) = k;
    m(2, 0) = -k;
    return lambda * m;
}

}  // namespace

TEST_SUITE("matrix_core") {

TEST_CASE("decompose: family and symmetric cases") {
    // r=1, k=0: pure strain diag(-2,1,1).
    auto pair = decompose(TraceFreeMatrix(family_mat(1, 1, 0)));
    CHECK(pair.strain().xx == doctest::Approx(-2).epsilon(1e-15));
    CHECK(pair.strain().yy == doctest::Approx(1).epsilon(1e-15));
    CHECK(pair.strain().zz == doctest::Approx(1).epsilon(1e-15));
    CHECK(norm(pair.vorticity()) == 0.0);

    // Any symmetric matrix has zero vorticity.
    auto g = tt::rng(101);
    for (int i = 0; i < 50; ++i) {
        const SymMat3 s = tt::random_sym_trace_free(g);
        const auto p = decompose(TraceFreeMatrix(s.to_mat3()));
        CHECK(norm(p.vorticity()) == 0.0);
    }

    // r=1/2, k=1: S = diag(-3/2, 1/2, 1), w = (0, 2, 0).
    pair = decompose(TraceFreeMatrix(family_mat(1, 0.5, 1)));
    CHECK(pair.strain().xx == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(pair.strain().yy == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pair.strain().zz == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pair.vorticity().x == 0.0);
    CHECK(pair.vorticity().y == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pair.vorticity().z == 0.0);
}

TEST_CASE("recompose: inverse of decompose") {
    CHECK(frobenius_norm(recompose({SymMat3{}, {0, 0, 0}}).matrix()) == 0.0);

    const auto diag_only = recompose({SymMat3::diag(-2, 1, 1), {0, 0, 0}});
    CHECK(tt::max_abs_diff(diag_only.matrix(), Mat3::diag(-2, 1, 1)) == 0.0);

    const auto fam = recompose({SymMat3::diag(-1.5, 0.5, 1.0), {0, 2, 0}});
    CHECK(tt::max_abs_diff(fam.matrix(), family_mat(1, 0.5, 1)) <= 1e-15);
}

TEST_CASE("vorticity sign convention: all six off-diagonal signs") {
    // M = S - A with A = (1/2)[[0,w3,-w2],[-w3,0,w1],[w2,-w1,0]].
    const auto m = recompose({SymMat3{}, {2, 4, 6}}).matrix();
    CHECK(m(0, 1) == -3.0);
    CHECK(m(1, 0) == 3.0);
    CHECK(m(0, 2) == 2.0);
    CHECK(m(2, 0) == -2.0);
    CHECK(m(1, 2) == -1.0);
    CHECK(m(2, 1) == 1.0);
    const auto back = decompose(TraceFreeMatrix(m));
    CHECK(back.vorticity().x == 2.0);
    CHECK(back.vorticity().y == 4.0);
    CHECK(back.vorticity().z == 6.0);
}

TEST_CASE("round trips are entrywise exact to 1e-15") {
    auto g = tt::rng(102);
    for (int i = 0; i < 200; ++i) {
        const TraceFreeMatrix m = tt::random_trace_free(g);
        const TraceFreeMatrix back = recompose(decompose(m));
        CHECK(tt::max_abs_diff(back.matrix(), m.matrix()) <=
              1e-15 * (1.0 + max_abs_entry(m.matrix())));

        const StrainVorticityPair p{tt::random_sym_trace_free(g), tt::random_vec(g)};
        const StrainVorticityPair back_p = decompose(recompose(p));
        CHECK(std::abs(back_p.strain().xx - p.strain().xx) <= 1e-15);
        CHECK(std::abs(back_p.strain().xy - p.strain().xy) <= 1e-15);
        CHECK(norm(back_p.vorticity() - p.vorticity()) <= 1e-14);
    }
}

TEST_CASE("velocity: eigenvector action and the strain-vorticity form") {
    CHECK(velocity(TraceFreeMatrix(Mat3::diag(-2, 1, 1)), Vec3{1, 0, 0}).x == -2.0);
    auto g0 = tt::rng(1);
    CHECK(norm(velocity(TraceFreeMatrix(), tt::random_vec(g0))) == 0.0);

    const Vec3 u = velocity(TraceFreeMatrix(family_mat(1, 0.5, 1)), Vec3{0, 0, 1});
    CHECK(u.x == doctest::Approx(1).epsilon(1e-15));
    CHECK(u.y == 0.0);
    CHECK(u.z == doctest::Approx(1).epsilon(1e-15));

    // u(x) = M x == S x + (1/2) w x x for all M, x.
    auto g = tt::rng(103);
    for (int i = 0; i < 200; ++i) {
        const TraceFreeMatrix m = tt::random_trace_free(g);
        const Vec3 x = tt::random_vec(g);
        const Vec3 a = velocity(m, x);
        const Vec3 b = velocity(decompose(m), x);
        CHECK(norm(a - b) <= 1e-13 * (1.0 + norm(a)));
    }
}

TEST_CASE("pressure: values and gradient") {
    CHECK(pressure(TraceFreeMatrix(), Vec3{3, -1, 2}) == 0.0);
    CHECK(pressure(TraceFreeMatrix(Mat3::diag(-2, 1, 1)), Vec3{1, 1, 1}) ==
          doctest::Approx(-3.0).epsilon(1e-15));

    // Family eigenvalues (-2r, r, r) lambda give tr(M^2) = 6 r^2 lambda^2,
    // so p = -r^2 lambda^2 |x|^2.
    const TraceFreeMatrix m(family_mat(2.0, 0.5, 1.0));
    const Vec3 x{1, 2, -1};
    CHECK(pressure(m, x) == doctest::Approx(-0.25 * 4.0 * 6.0).epsilon(1e-14));

    // grad p = -(1/3) tr(M^2) x, checked by central differences.
    auto g = tt::rng(104);
    const TraceFreeMatrix mr = tt::random_trace_free(g);
    const double tr_m2 = trace(mr.matrix() * mr.matrix());
    const Vec3 x0 = tt::random_vec(g);
    const double h = 1e-6;
    for (int c = 0; c < 3; ++c) {
        Vec3 xp = x0, xm = x0;
        xp[c] += h;
        xm[c] -= h;
        const double fd = (pressure(mr, xp) - pressure(mr, xm)) / (2.0 * h);
        CHECK(fd == doctest::Approx(-tr_m2 / 3.0 * x0[c]).epsilon(1e-7));
    }
}

TEST_CASE("ns_residual: zero data, family data, own-RHS data") {
    CHECK(frobenius_norm(ns_residual(TraceFreeMatrix(), TraceFreeMatrix())) == 0.0);

    // Family at t=0 (lambda0=1, r=1, k=0): dM = d(lambda) diag(-2,1,1).
    const FamilySolution fam(1.0, 1.0);
    const TraceFreeMatrix m0 = fam.matrix_at(0.0);
    const TraceFreeMatrix dm0(fam.dlambda_at(0.0) * Mat3::diag(-2, 1, 1));
    CHECK(frobenius_norm(ns_residual(m0, dm0)) <= 1e-12);

    // dM set to the negated nonlinear term is exactly a solution slope.
    const Mat3 d = Mat3::diag(-2, 1, 1);
    const Mat3 rhs = -(d * d) + (trace(d * d) / 3.0) * Mat3::identity();
    CHECK(frobenius_norm(ns_residual(TraceFreeMatrix(d), TraceFreeMatrix(rhs))) == 0.0);
}

TEST_CASE("pair_residual: zero, family analytic derivative, negated-term data") {
    const auto zero = pair_residual({SymMat3{}, {0, 0, 0}}, SymMat3{}, {0, 0, 0});
    CHECK(frobenius_norm(zero.strain) == 0.0);
    CHECK(norm(zero.vorticity) == 0.0);

    // Family (lambda0=1, r=1/2, k=1): dS = diag(-(1+r), r, 1) dlambda,
    // dw = (0, 2k dlambda, 0).
    const FamilySolution fam(1.0, 0.5);
    for (double t : {0.0, 0.7, 1.5}) {
        const double dl = fam.dlambda_at(t);
        const SymMat3 ds = SymMat3::diag(-(1.0 + fam.r()) * dl, fam.r() * dl, dl);
        const Vec3 dw{0.0, 2.0 * fam.k() * dl, 0.0};
        const auto res = pair_residual(fam.pair_at(t), ds, dw);
        const double scale = fam.lambda_at(t) * fam.lambda_at(t);
        CHECK(frobenius_norm(res.strain) <= 1e-12 * scale);
        CHECK(norm(res.vorticity) <= 1e-12 * scale);
    }

    auto g = tt::rng(105);
    for (int i = 0; i < 50; ++i) {
        const StrainVorticityPair p{tt::random_sym_trace_free(g), tt::random_vec(g)};
        // Probing with zero derivatives returns the nonlinear terms; negating
        // them must give a bitwise-zero residual.
        const auto probe = pair_residual(p, SymMat3{}, {0, 0, 0});
        const SymMat3 ds = -1.0 * SymMat3::symmetric_part(probe.strain);
        const Vec3 dw = -probe.vorticity;  // = S w
        const auto res = pair_residual(p, ds, dw);
        // The strain cancellation re-associates the sum, so up to one ulp of
        // dust survives; the vorticity residual cancels term by term.
        CHECK(frobenius_norm(res.strain) <= 4e-16 * (1.0 + max_abs_entry(probe.strain)));
        CHECK(norm(res.vorticity) == 0.0);
    }
}

TEST_CASE("classic evolution form coincides with the pair form") {
    const auto zero = classic_evolution_residual({SymMat3{}, {0, 0, 0}}, SymMat3{}, {0, 0, 0});
    CHECK(frobenius_norm(zero.strain) == 0.0);

    const FamilySolution fam(1.0, 0.5);
    const double dl = fam.dlambda_at(0.3);
    const SymMat3 ds = SymMat3::diag(-(1.0 + fam.r()) * dl, fam.r() * dl, dl);
    const Vec3 dw{0.0, 2.0 * fam.k() * dl, 0.0};
    const auto res = classic_evolution_residual(fam.pair_at(0.3), ds, dw);
    CHECK(frobenius_norm(res.strain) <= 1e-12 * fam.lambda_at(0.3) * fam.lambda_at(0.3));
    CHECK(norm(res.vorticity) <= 1e-12);

    auto g = tt::rng(106);
    for (int i = 0; i < 100; ++i) {
        const StrainVorticityPair p{tt::random_sym_trace_free(g), tt::random_vec(g)};
        const SymMat3 ds_r = tt::random_sym_trace_free(g);
        const Vec3 dw_r = tt::random_vec(g);
        const auto a = pair_residual(p, ds_r, dw_r);
        const auto b = classic_evolution_residual(p, ds_r, dw_r);
        CHECK(tt::max_abs_diff(a.strain, b.strain) <=
              1e-14 * (1.0 + max_abs_entry(a.strain)));
        CHECK(norm(a.vorticity - b.vorticity) == 0.0);
    }
}

TEST_CASE("norm identities |M|^2 = |S|^2 + |w|^2/2 and tr(M^2) = |S|^2 - |w|^2/2") {
    auto g = tt::rng(107);
    for (int i = 0; i < 200; ++i) {
        const TraceFreeMatrix m = tt::random_trace_free(g);
        const auto p = decompose(m);
        const double m_sq = frobenius_norm_sq(m.matrix());
        const double s_sq = p.strain().frobenius_norm_sq();
        const double w_sq = dot(p.vorticity(), p.vorticity());
        CHECK(m_sq == doctest::Approx(s_sq + 0.5 * w_sq).epsilon(1e-13));
        CHECK(trace(m.matrix() * m.matrix()) ==
              doctest::Approx(s_sq - 0.5 * w_sq).epsilon(1e-13));
    }
}

TEST_CASE("SA + AS equals the antisymmetric matrix of -(1/2) S w") {
    auto g = tt::rng(108);
    for (int i = 0; i < 200; ++i) {
        const SymMat3 s = tt::random_sym_trace_free(g);
        const Vec3 w = tt::random_vec(g);
        const Mat3 a = 0.5 * vorticity_matrix(w);
        const Mat3 lhs = s.to_mat3() * a + a * s.to_mat3();
        const Mat3 rhs = -0.5 * vorticity_matrix(s * w);
        CHECK(tt::max_abs_diff(lhs, rhs) <= 1e-13 * (1.0 + max_abs_entry(lhs)));
    }
}

TEST_CASE("residual-level equivalence of the two formulations") {
    auto g = tt::rng(109);
    for (int i = 0; i < 100; ++i) {
        const TraceFreeMatrix m = tt::random_trace_free(g);
        const TraceFreeMatrix dm = tt::random_trace_free(g);
        const Mat3 r_matrix = ns_residual(m, dm);

        const auto p = decompose(m);
        const auto dp = decompose(dm);
        const auto r_pair = pair_residual(p, dp.strain(), dp.vorticity());

        // Symmetric part of the matrix residual is the strain residual.
        const Mat3 sym = 0.5 * (r_matrix + transpose(r_matrix));
        CHECK(tt::max_abs_diff(sym, r_pair.strain) <=
              1e-13 * (1.0 + max_abs_entry(r_pair.strain)));

        // Antisymmetric part encodes -(1/2) x vorticity residual.
        const Mat3 antisym = 0.5 * (r_matrix - transpose(r_matrix));
        const Vec3 v_res = -2.0 * axial_vector(antisym);
        CHECK(norm(v_res - r_pair.vorticity) <= 1e-13 * (1.0 + norm(r_pair.vorticity)));
    }
}

TEST_CASE("trace-free enforcement: projection flag and rejection") {
    Mat3 ok = Mat3::diag(1.0, 1.0, -2.0);
    CHECK_FALSE(TraceFreeMatrix(ok).was_projected());

    Mat3 drifted = ok;
    drifted(0, 0) += 1e-9;  // violation above 1e-12, below rejection
    const TraceFreeMatrix fixed(drifted);
    CHECK(fixed.was_projected());
    CHECK(std::abs(trace(fixed.matrix())) <= 1e-12 * (1.0 + fixed.frobenius_norm()));

    Mat3 bad = ok;
    bad(0, 0) += 0.5;
    CHECK_THROWS_AS(TraceFreeMatrix{bad}, std::domain_error);
    CHECK(std::abs(trace(TraceFreeMatrix::project(bad).matrix())) <= 1e-15);

    SymMat3 s = SymMat3::diag(1.0, 1.0, -2.0 + 0.5);
    CHECK_THROWS_AS(StrainVorticityPair(s, Vec3{}), std::domain_error);
}

TEST_CASE("velocity field divergence vanishes") {
    auto g = tt::rng(110);
    const VelocityField u(tt::random_trace_free(g));
    CHECK(std::abs(u.divergence()) <= 1e-14);
}

}  // TEST_SUITE
