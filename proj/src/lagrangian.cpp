#include "linflow/lagrangian.hpp"

#include <cmath>
#include <stdexcept>

#include "linflow/detail/driver.hpp"

namespace linflow {

FlowMapSpec::FlowMapSpec(const FamilySolution& family)
    : family_(family), basis_(family_eigenbasis(family.r(), family.k())) {
    // family_eigenbasis already enforces r in (0, 1] and family membership.
    q_inv_ = inverse(basis_.q);
}

double FlowMapSpec::shrink_factor(double t) const {
    const double u = 1.0 - family_.r() * family_.lambda0() * t;
    if (t < 0.0 || u <= 0.0)
        throw std::domain_error("FlowMapSpec: t outside [0, t_max)");
    return u;
}

Vec3 FlowMapSpec::d_diag(double t) const {
    const double u = shrink_factor(t);
    return {u * u, 1.0 / u, 1.0 / u};
}

double FlowMapSpec::jacobian_det(double t) const {
    const Vec3 d = d_diag(t);
    return d.x * d.y * d.z;
}

Vec3 flow_map(const FlowMapSpec& spec, Vec3 y0, double t) {
    const Vec3 d = spec.d_diag(t);
    const Vec3 c = spec.q_inv_ * y0;  // eigenbasis coordinates
    return (c.x * d.x) * spec.basis().v1 + (c.y * d.y) * spec.basis().v2 +
           (c.z * d.z) * spec.basis().v3;
}

Trajectory<Vec3> advect(const std::function<Mat3(double)>& m_of_t, Vec3 y0,
                        const SolverConfig& cfg) {
    const auto rhs = [&m_of_t](double t, const detail::StateArray<3>& y,
                               detail::StateArray<3>& dy) {
        const Vec3 v = m_of_t(t) * Vec3{y[0], y[1], y[2]};
        dy = {v.x, v.y, v.z};
    };
    return detail::run_integration<3, Vec3>(
        cfg, y0, rhs,
        [](detail::StateArray<3>&, Trajectory<Vec3>&) { return false; },
        [](const detail::StateArray<3>&, const detail::StateArray<3>&) { return true; },
        [](const Vec3& v) { return detail::StateArray<3>{v.x, v.y, v.z}; },
        [](const detail::StateArray<3>& y) { return Vec3{y[0], y[1], y[2]}; });
}

Vec3 circle_image_eigenplane(double r0_radius, const FlowMapSpec& spec, double t,
                             double theta) {
    const double u = spec.shrink_factor(t);
    const double radius = r0_radius / u;
    return (radius * std::cos(theta)) * spec.basis().v2 +
           (radius * std::sin(theta)) * spec.basis().v3;
}

Vec3 circle_image_yz(double r0_radius, const FlowMapSpec& spec, double t, double theta) {
    const double u = spec.shrink_factor(t);
    const double r = spec.family().r();
    const double k = spec.family().k();
    const double opp = 1.0 + 2.0 * r;
    const double n = std::sqrt(k * k + opp * opp);
    const double c1 = -k * n / (3.0 * r * opp);  // 0 at r = 1 (k = 0)
    const double c3 = n / (3.0 * r);
    const double s = std::sin(theta);
    return (c1 * r0_radius * s * u * u) * spec.basis().v1 +
           (r0_radius * std::cos(theta) / u) * spec.basis().v2 +
           (c3 * r0_radius * s / u) * spec.basis().v3;
}

PressureProbe seregin_sverak_probe(const FlowMapSpec& spec, double t, double radius) {
    if (!(radius > 0.0))
        throw std::domain_error("seregin_sverak_probe: radius must be positive");
    const double u = spec.shrink_factor(t);
    const double r = spec.family().r();
    const double lam0 = spec.family().lambda0();
    // p = -(1/6) tr(M^2) |x|^2 with tr(M(t)^2) = 6 r^2 lambda(t)^2; along the
    // v1 axis the velocity is -2 r lambda(t) radius v1, so the Bernoulli
    // quantity is exactly -p.
    const double base = r * r * lam0 * lam0 * radius * radius / (u * u);
    return {-base, base};
}

}  // namespace linflow
