#ifndef LINFLOW_CLOSED_FORMS_HPP
#define LINFLOW_CLOSED_FORMS_HPP

#include <optional>
#include <vector>

#include "linflow/state.hpp"

// Exact solution families of the matrix evolution equation for eigenframe-
// aligned data, their conserved quantities, and limit formulas.
//
// Aligned data is parameterized by (lambda, r, k):
//   S = diag(-(1+r), r, 1) * lambda,   w = (0, 2 k lambda, 0),
// equivalently M = lambda * [[-(1+r), 0, k], [0, r, 0], [-k, 0, 1]].

namespace linflow {

/// (lambda, r, k) with lambda > 0. r is the middle/largest strain eigenvalue
/// ratio, k the half vorticity over lambda.
struct AlignedParams {
    double lambda = 1.0;
    double r = 0.0;
    double k = 0.0;

    AlignedParams() = default;
    AlignedParams(double lambda_, double r_, double k_);

    /// Defect g = 1 + r - 2r^2 - k^2; zero exactly on the invariant family.
    double g() const { return 1.0 + r - 2.0 * r * r - k * k; }

    /// Conserved ratio k/(r+2); undefined at r = -2.
    std::optional<double> m0() const {
        if (r == -2.0) return std::nullopt;
        return k / (r + 2.0);
    }

    // Strain eigenvalues in the aligned frame.
    double lambda1() const { return -(r + 1.0) * lambda; }
    double lambda2() const { return r * lambda; }
    double lambda3() const { return lambda; }
};

/// S = diag(-(1+r), r, 1) lambda, w = (0, 2 k lambda, 0).
StrainVorticityPair aligned_pair(const AlignedParams& p);

/// M = lambda [[-(1+r), 0, k], [0, r, 0], [-k, 0, 1]] (= recompose(aligned_pair)).
TraceFreeMatrix aligned_matrix(const AlignedParams& p);

/// k(r) = +sqrt(1 + r - 2r^2) on the invariant family; domain r in [-1/2, 1].
double family_k(double r);

/// Invariant-family solution: r, k frozen, lambda(t) = lambda0 / (1 - r lambda0 t).
/// Blows up at t_max = 1/(r lambda0) when r > 0; global otherwise.
class FamilySolution {
  public:
    FamilySolution(double lambda0, double r);

    double lambda0() const { return lambda0_; }
    double r() const { return r_; }
    double k() const { return k_; }

    /// Blowup time; nullopt means the solution is global (r <= 0).
    std::optional<double> t_max() const { return t_max_; }

    /// lambda(t); throws std::domain_error outside [0, t_max).
    double lambda_at(double t) const;

    /// Aligned parameters at time t (r and k are constant in time).
    AlignedParams state_at(double t) const;

    /// d(lambda)/dt = r lambda(t)^2.
    double dlambda_at(double t) const;

    TraceFreeMatrix matrix_at(double t) const { return aligned_matrix(state_at(t)); }
    StrainVorticityPair pair_at(double t) const { return aligned_pair(state_at(t)); }

  private:
    double lambda0_;
    double r_;
    double k_;
    std::optional<double> t_max_;
};

/// g(r, k) = 1 + r - 2r^2 - k^2.
inline double g_defect(double r, double k) { return 1.0 + r - 2.0 * r * r - k * k; }

struct LimitConstants {
    double r_inf;
    double k_inf;
    double r_star;        // the other root of g along k = m0 (r + 2)
    bool at_boundary;     // |m0| == 1/2 exactly: continuous extension (0, +-1)
};

/// Attracting limits for conserved ratio m0:
///   r_inf  = (1 - 4 m0^2 + 3 sqrt(1 - 4 m0^2)) / (2 m0^2 + 4)
///   k_inf  = m0 (9 + 3 sqrt(1 - 4 m0^2)) / (2 m0^2 + 4)
///   r_star = (1 - 4 m0^2 - 3 sqrt(1 - 4 m0^2)) / (2 m0^2 + 4)
/// Domain |m0| <= 1/2; the endpoints are flagged (reached only as t -> inf).
LimitConstants limit_constants(double m0);

struct DefectiveState {
    double lambda;
    double offdiag;
};

/// Closed form for the defective spectral case:
///   lambda(t) = lambda0 / (1 - lambda0 t),  offdiag(t) = (1 - lambda0 t)^2,
/// solving d(lambda)/dt = lambda^2, d(offdiag)/dt = -2 lambda offdiag.
/// Domain 0 <= t < 1/lambda0.
DefectiveState defective_closed_form(double lambda0, double t);

/// Conserved quantity of the boundary case m0^2 = 1/4, r0 > 0:
///   c = lambda r^(2/3) (r + 2)^(1/3).
/// On that slice the reduced system is d(lambda)/dt = (1/4)(3r^2+4r) lambda^2,
/// dr/dt = -(3/4) lambda (r+2) r^2, and d/dt log c = 0 term by term.
/// Domain lambda > 0, r > 0.
double boundary_invariant(double lambda, double r);

struct RBracket {
    double lower;
    double upper;
};

/// Two-sided bracket for r(t) along a boundary-case trajectory, from
/// r(t)^(-1/3) = r0^(-1/3) + (c0/4) * integral of (r+2)^(2/3) and
/// 2 < r(tau) + 2 < r0 + 2:
///   r0 / (1 + (c0/4) r0^(1/3) (r0+2)^(2/3) t)^3  <  r(t)
///   r(t)  <  r0 / (1 + (c0/4) r0^(1/3) 2^(2/3) t)^3
/// with c0 = boundary_invariant(lambda0, r0). Both bounds decay to zero, so
/// r -> 0 and lambda = c0 r^(-2/3) (r+2)^(-1/3) -> infinity as t -> infinity
/// ("blowup at infinity", at the rate t^2).
RBracket boundary_r_bounds(double r0, double lambda0, double t);

/// sup over the final decade of samples (lambda >= max lambda / 10) of
/// |(t_max_est - t) * lambda(t) - 1|; the blowup-rate diagnostic.
double lambda_asymptotic_check(const std::vector<double>& times,
                               const std::vector<double>& lambdas, double t_max_est);

}  // namespace linflow

#endif  // LINFLOW_CLOSED_FORMS_HPP
