#ifndef LINFLOW_STATE_HPP
#define LINFLOW_STATE_HPP

#include <utility>

#include "linflow/mat3.hpp"

// State types for spatially linear incompressible velocity fields u(x) = M x,
// together with the algebraic kernels relating the matrix form to the
// strain/vorticity form and the residuals of their evolution equations:
//
//   d/dt M + M^2 - (1/3) tr(M^2) I = 0,          tr(M) = 0
//   d/dt S + S^2 - (1/3)|S|^2 I + (1/4) w(x)w - (1/12)|w|^2 I = 0
//   d/dt w - S w = 0
//
// |.| is the Frobenius norm throughout.

namespace linflow {

// Symmetric 3x3 matrix stored as its six independent entries, so symmetry is
// exact by construction.
struct SymMat3 {
    double xx = 0.0, yy = 0.0, zz = 0.0;
    double xy = 0.0, xz = 0.0, yz = 0.0;

    static SymMat3 diag(double a, double b, double c) { return {a, b, c, 0.0, 0.0, 0.0}; }

    // Symmetric part of an arbitrary matrix.
    static SymMat3 symmetric_part(const Mat3& m) {
        return {m(0, 0), m(1, 1), m(2, 2),
                0.5 * (m(0, 1) + m(1, 0)),
                0.5 * (m(0, 2) + m(2, 0)),
                0.5 * (m(1, 2) + m(2, 1))};
    }

    Mat3 to_mat3() const {
        Mat3 m;
        m(0, 0) = xx;
        m(1, 1) = yy;
        m(2, 2) = zz;
        m(0, 1) = m(1, 0) = xy;
        m(0, 2) = m(2, 0) = xz;
        m(1, 2) = m(2, 1) = yz;
        return m;
    }

    double trace() const { return xx + yy + zz; }
    double frobenius_norm_sq() const {
        return xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz);
    }

    Vec3 operator*(Vec3 v) const {
        return {xx * v.x + xy * v.y + xz * v.z,
                xy * v.x + yy * v.y + yz * v.z,
                xz * v.x + yz * v.y + zz * v.z};
    }
};

inline SymMat3 operator+(SymMat3 a, SymMat3 b) {
    return {a.xx + b.xx, a.yy + b.yy, a.zz + b.zz, a.xy + b.xy, a.xz + b.xz, a.yz + b.yz};
}
inline SymMat3 operator-(SymMat3 a, SymMat3 b) {
    return {a.xx - b.xx, a.yy - b.yy, a.zz - b.zz, a.xy - b.xy, a.xz - b.xz, a.yz - b.yz};
}
inline SymMat3 operator*(double s, SymMat3 a) {
    return {s * a.xx, s * a.yy, s * a.zz, s * a.xy, s * a.xz, s * a.yz};
}

/// Trace-free real 3x3 matrix: the state M of the matrix evolution equation.
/// Constructors accept input whose trace is within 1e-12 * (1 + |M|) as-is,
/// project slightly drifted input (recording a flag), and reject input whose
/// trace violation exceeds 1e-6 * (1 + |M|) -- silently "fixing" clearly
/// non-trace-free data would mask caller bugs.
class TraceFreeMatrix {
  public:
    static constexpr double trace_tol = 1e-12;
    static constexpr double trace_reject_tol = 1e-6;

    TraceFreeMatrix() = default;
    explicit TraceFreeMatrix(const Mat3& m);

    /// Unconditional projection m - (tr(m)/3) I, no flag, never throws.
    static TraceFreeMatrix project(const Mat3& m);

    const Mat3& matrix() const { return m_; }
    bool was_projected() const { return projected_; }

    double frobenius_norm() const { return linflow::frobenius_norm(m_); }

  private:
    Mat3 m_;
    bool projected_ = false;
};

/// Symmetric trace-free strain plus vorticity vector: the equivalent state
/// representation (S, w). Same trace policy as TraceFreeMatrix.
class StrainVorticityPair {
  public:
    StrainVorticityPair() = default;
    StrainVorticityPair(const SymMat3& strain, Vec3 vorticity);

    const SymMat3& strain() const { return s_; }
    Vec3 vorticity() const { return w_; }
    bool was_projected() const { return projected_; }

  private:
    SymMat3 s_;
    Vec3 w_;
    bool projected_ = false;
};

/// u(x) = M x. Divergence-free because tr(M) = 0.
class VelocityField {
  public:
    explicit VelocityField(TraceFreeMatrix m) : m_(std::move(m)) {}

    Vec3 operator()(Vec3 x) const { return m_.matrix() * x; }
    double divergence() const { return trace(m_.matrix()); }
    const TraceFreeMatrix& matrix() const { return m_; }

  private:
    TraceFreeMatrix m_;
};

/// S = (M + M^T)/2 and w read off from M^T - M = [[0,w3,-w2],[-w3,0,w1],[w2,-w1,0]].
StrainVorticityPair decompose(const TraceFreeMatrix& m);

/// M = S - A with A = (1/2)[[0,w3,-w2],[-w3,0,w1],[w2,-w1,0]]; inverse of decompose.
TraceFreeMatrix recompose(const StrainVorticityPair& pair);

inline Vec3 velocity(const TraceFreeMatrix& m, Vec3 x) { return m.matrix() * x; }

/// Strain/vorticity form of the same field: u(x) = S x + (1/2) w x x.
inline Vec3 velocity(const StrainVorticityPair& pair, Vec3 x) {
    return pair.strain() * x + 0.5 * cross(pair.vorticity(), x);
}

/// p(x) = -(1/6) tr(M^2) |x|^2, the canonical (radial quadratic) pressure.
double pressure(const TraceFreeMatrix& m, Vec3 x);

/// dM + M^2 - (1/3) tr(M^2) I. Zero iff (M, dM) satisfies the matrix equation.
Mat3 ns_residual(const TraceFreeMatrix& m, const TraceFreeMatrix& dm);

struct PairResidual {
    Mat3 strain;      // symmetric
    Vec3 vorticity;
};

/// Residuals of the strain-vorticity pair equation for candidate derivatives
/// (dS, dw). Both vanish iff ns_residual of the recomposed (M, dM) vanishes.
PairResidual pair_residual(const StrainVorticityPair& pair, const SymMat3& ds, Vec3 dw);

/// Same residuals written in the classic strain/vorticity evolution form with
/// Hess(p) = (-(1/3)|S|^2 + (1/6)|w|^2) I; the Laplacian and advection terms
/// vanish identically for spatially linear fields. Coincides with
/// pair_residual as an algebraic identity.
PairResidual classic_evolution_residual(const StrainVorticityPair& pair, const SymMat3& ds,
                                        Vec3 dw);

}  // namespace linflow

#endif  // LINFLOW_STATE_HPP
