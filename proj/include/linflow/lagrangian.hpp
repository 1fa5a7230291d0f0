#ifndef LINFLOW_LAGRANGIAN_HPP
#define LINFLOW_LAGRANGIAN_HPP

#include <functional>

#include "linflow/closed_forms.hpp"
#include "linflow/dynamics.hpp"
#include "linflow/spectral.hpp"

// Lagrangian flow maps for the invariant blowup family, the circle-evolution
// geometry, and the pressure/Bernoulli blowup diagnostics.
//
// For family data the flow map is exactly Y(y0, t) = Q D(t) Q^-1 y0 with
// D(t) = diag(u^2, 1/u, 1/u), u = 1 - r lambda0 t, and Q the (non-orthogonal
// for k != 0) eigenbasis. det D = 1: the map is volume preserving.

namespace linflow {

class FlowMapSpec {
  public:
    /// Requires a family with r in (0, 1] (finite-time blowup branch).
    explicit FlowMapSpec(const FamilySolution& family);

    const FamilySolution& family() const { return family_; }
    const FamilyEigenbasis& basis() const { return basis_; }

    /// 1 - r lambda0 t; throws std::domain_error outside [0, t_max).
    double shrink_factor(double t) const;

    /// Diagonal of D(t) = diag(u^2, 1/u, 1/u).
    Vec3 d_diag(double t) const;

    /// det of the flow-map Jacobian, computed from the exact diagonal law
    /// (u^2 * 1/u * 1/u), not finite differences.
    double jacobian_det(double t) const;

  private:
    FamilySolution family_;
    FamilyEigenbasis basis_;
    Mat3 q_inv_;

    friend Vec3 flow_map(const FlowMapSpec&, Vec3, double);
};

/// Y(y0, t) = Q D(t) Q^-1 y0; Y(y0, 0) = y0 exactly.
Vec3 flow_map(const FlowMapSpec& spec, Vec3 y0, double t);

/// Numerical particle advection dy/dt = M(t) y for an arbitrary time-indexed
/// matrix source; the mutual oracle for flow_map.
Trajectory<Vec3> advect(const std::function<Mat3(double)>& m_of_t, Vec3 y0,
                        const SolverConfig& cfg);

/// Image of the point at angle theta of the radius-R0 circle in the
/// eigenplane span{v2, v3}: the circle scales isotropically to radius
/// R0 / (1 - r lambda0 t).
Vec3 circle_image_eigenplane(double r0_radius, const FlowMapSpec& spec, double t, double theta);

/// Image of the point at angle theta of the radius-R0 circle in the yz-plane
/// (e2-e3), which is not eigenbasis-aligned for 0 < r < 1. With
///   c1 = -k sqrt(k^2+(1+2r)^2) / (3r(1+2r)),  c3 = sqrt(k^2+(1+2r)^2) / (3r),
/// (so that e3 = c1 v1 + c3 v3) the image point is
///   c1 R0 sin(theta) u^2 v1 + R0 cos(theta)/u v2 + c3 R0 sin(theta)/u v3.
/// At t = 0 this reproduces the starting circle exactly; as t -> T the image
/// approaches an ellipse in span{v2, v3} with axis ratio c3 (> 1 for r < 1).
Vec3 circle_image_yz(double r0_radius, const FlowMapSpec& spec, double t, double theta);

struct PressureProbe {
    double pressure;   // p(x, t) at x = radius * v1
    double bernoulli;  // p + |u|^2 / 2 at the same point
};

/// Pressure and Bernoulli quantity along the compression axis v1:
///   p = -r^2 lambda0^2 radius^2 / u^2,   p + |u|^2/2 = +r^2 lambda0^2 radius^2 / u^2.
/// p is strictly decreasing and the Bernoulli quantity strictly increasing in
/// t: the necessary blowup signature (Seregin-Sverak) for this family.
PressureProbe seregin_sverak_probe(const FlowMapSpec& spec, double t, double radius);

}  // namespace linflow

#endif  // LINFLOW_LAGRANGIAN_HPP
