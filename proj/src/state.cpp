#include "linflow/state.hpp"

#include <stdexcept>

namespace linflow {

namespace {

// Relative trace violation against 1 + Frobenius norm.
double trace_violation(double tr, double fnorm) { return std::abs(tr) / (1.0 + fnorm); }

}  // namespace

TraceFreeMatrix::TraceFreeMatrix(const Mat3& m) : m_(m) {
    const double tr = trace(m);
    const double viol = trace_violation(tr, linflow::frobenius_norm(m));
    if (viol <= trace_tol) return;
    if (viol > trace_reject_tol)
        throw std::domain_error("TraceFreeMatrix: input trace violates trace-free constraint");
    const double third = tr / 3.0;
    m_(0, 0) -= third;
    m_(1, 1) -= third;
    m_(2, 2) -= third;
    projected_ = true;
}

TraceFreeMatrix TraceFreeMatrix::project(const Mat3& m) {
    const double third = trace(m) / 3.0;
    Mat3 p = m;
    p(0, 0) -= third;
    p(1, 1) -= third;
    p(2, 2) -= third;
    TraceFreeMatrix out;
    out.m_ = p;
    return out;
}

StrainVorticityPair::StrainVorticityPair(const SymMat3& strain, Vec3 vorticity)
    : s_(strain), w_(vorticity) {
    const double tr = strain.trace();
    const double viol = trace_violation(tr, std::sqrt(strain.frobenius_norm_sq()));
    if (viol <= TraceFreeMatrix::trace_tol) return;
    if (viol > TraceFreeMatrix::trace_reject_tol)
        throw std::domain_error("StrainVorticityPair: strain trace violates trace-free constraint");
    const double third = tr / 3.0;
    s_.xx -= third;
    s_.yy -= third;
    s_.zz -= third;
    projected_ = true;
}

StrainVorticityPair decompose(const TraceFreeMatrix& tf) {
    const Mat3& m = tf.matrix();
    const SymMat3 s = SymMat3::symmetric_part(m);
    // M^T - M = [[0, w3, -w2], [-w3, 0, w1], [w2, -w1, 0]]
    const Vec3 w{m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
    return {s, w};
}

TraceFreeMatrix recompose(const StrainVorticityPair& pair) {
    const Mat3 a = 0.5 * vorticity_matrix(pair.vorticity());
    return TraceFreeMatrix(pair.strain().to_mat3() - a);
}

double pressure(const TraceFreeMatrix& m, Vec3 x) {
    const double tr_m2 = trace(m.matrix() * m.matrix());
    return -(1.0 / 6.0) * tr_m2 * dot(x, x);
}

Mat3 ns_residual(const TraceFreeMatrix& m, const TraceFreeMatrix& dm) {
    const Mat3 m2 = m.matrix() * m.matrix();
    return dm.matrix() + m2 - (trace(m2) / 3.0) * Mat3::identity();
}

PairResidual pair_residual(const StrainVorticityPair& pair, const SymMat3& ds, Vec3 dw) {
    const Mat3 s = pair.strain().to_mat3();
    const Vec3 w = pair.vorticity();
    const double s_sq = pair.strain().frobenius_norm_sq();
    const double w_sq = dot(w, w);
    const Mat3 rs = ds.to_mat3() + s * s - (s_sq / 3.0) * Mat3::identity() +
                    0.25 * outer(w, w) - (w_sq / 12.0) * Mat3::identity();
    const Vec3 rw = dw - pair.strain() * w;
    return {rs, rw};
}

PairResidual classic_evolution_residual(const StrainVorticityPair& pair, const SymMat3& ds,
                                        Vec3 dw) {
    const Mat3 s = pair.strain().to_mat3();
    const Vec3 w = pair.vorticity();
    const double s_sq = pair.strain().frobenius_norm_sq();
    const double w_sq = dot(w, w);
    const double hess_p = -s_sq / 3.0 + w_sq / 6.0;
    const Mat3 rs = ds.to_mat3() + s * s + 0.25 * outer(w, w) -
                    (w_sq / 4.0) * Mat3::identity() + hess_p * Mat3::identity();
    const Vec3 rw = dw - pair.strain() * w;
    return {rs, rw};
}

}  // namespace linflow
