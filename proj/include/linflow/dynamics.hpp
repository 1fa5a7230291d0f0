#ifndef LINFLOW_DYNAMICS_HPP
#define LINFLOW_DYNAMICS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "linflow/closed_forms.hpp"
#include "linflow/state.hpp"

// Adaptive numerical integration of the four ODE systems (matrix,
// strain-vorticity pair, aligned parameters, complex-pair parameters), with
// blowup detection and singular-time extrapolation. This module is the
// independent oracle every closed form and classifier prediction is checked
// against, so it shares no formulas with closed_forms beyond the state types.

namespace linflow {

struct SolverConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_end = 10.0;
    double blowup_norm_threshold = 1e9;
    double min_step_factor = 1e-14;  // min step = factor * t_end
    std::size_t max_samples = 200000;
    // Times the integrator lands on exactly and records (sorted internally).
    std::vector<double> sample_times;

    double min_step() const { return min_step_factor * t_end; }
    /// Throws std::invalid_argument on nonsensical settings.
    void validate() const;
};

enum class TerminationKind { horizon_reached, blowup, step_underflow };

struct BlowupEstimate {
    double t_max;
    double lower;   // confidence interval
    double upper;
};

struct Termination {
    TerminationKind kind = TerminationKind::horizon_reached;
    std::optional<BlowupEstimate> blowup;  // present iff kind == blowup
};

/// Time-stamped sample sequence. Samples cover t = 0, every caller-requested
/// time, and all accepted steps (thinned toward max_samples, except the final
/// decade of norms, which the extrapolator needs in full).
template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<double> norms;  // blowup-driving norm, matched to times
    Termination termination;
    std::size_t trace_projections = 0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double rel_tol_used = 0.0;

    /// Index of the sample at exactly time t (integrator lands on requested
    /// times bit-exactly), or nullopt.
    std::optional<std::size_t> index_at_time(double t) const {
        for (std::size_t i = times.size(); i-- > 0;) {
            if (times[i] == t) return i;
            if (times[i] < t) break;
        }
        return std::nullopt;
    }
};

/// Strain-vorticity state as integrated: six strain entries plus vorticity.
struct PairState {
    SymMat3 strain;
    Vec3 vorticity;

    StrainVorticityPair pair() const { return {strain, vorticity}; }
};

/// Aligned-parameter state as integrated. r + 2 is the stored variable: it
/// decays to zero like lambda^-3 on the r -> -2 attractor, far below the
/// spacing of doubles near -2, and its sign is an exact invariant of the flow.
struct ParamState {
    double lambda = 1.0;
    double r_plus_2 = 2.0;
    double k = 0.0;

    double r() const { return r_plus_2 - 2.0; }
    double g() const {
        return -9.0 + 9.0 * r_plus_2 - 2.0 * r_plus_2 * r_plus_2 - k * k;
    }
    /// Conserved ratio k/(r+2); full precision, no re-subtraction.
    double m() const { return k / r_plus_2; }
    AlignedParams params() const { return {lambda, r(), k}; }
};

/// Complex-pair canonical state (lambda, a) plus the running integral of
/// lambda, which the conservation law a(t) exp(2 int lambda) = a0 needs.
struct ComplexPairState {
    double lambda = 1.0;
    double a = 0.0;
    double lambda_integral = 0.0;
};

// Norms driving the blowup threshold: the Frobenius norm of the equivalent
// matrix state in every formulation (Euclidean norm for advected points).
double state_norm(const Mat3& m);
double state_norm(const PairState& s);
double state_norm(const ParamState& s);
double state_norm(const ComplexPairState& s);
inline double state_norm(Vec3 v) { return norm(v); }

/// d/dt M = -M^2 + (1/3) tr(M^2) I from M0; trace re-projected when drift
/// exceeds 1e-10 * |M| (projections counted on the trajectory).
Trajectory<Mat3> integrate_matrix(const TraceFreeMatrix& m0, const SolverConfig& cfg);

/// The pair system: d/dt S = -(S^2 - (1/3)|S|^2 I + (1/4) w(x)w - (1/12)|w|^2 I),
/// d/dt w = S w.
Trajectory<PairState> integrate_pair(const StrainVorticityPair& p0, const SolverConfig& cfg);

/// Aligned parameter system, in g-form:
///   d(lambda)/dt = (r - g/3) lambda^2,  d(r+2)/dt = (1/3) lambda g (r+2),
///   dk/dt = (1/3) lambda g k.
/// r0 = -2 stays exactly -2; the sign of r+2 is preserved exactly.
Trajectory<ParamState> integrate_params(const AlignedParams& p0, const SolverConfig& cfg);

/// Complex-pair system d(lambda)/dt = lambda^2 + a^2/3, da/dt = -2 lambda a.
Trajectory<ComplexPairState> integrate_complex_params(double lambda0, double a0,
                                                      const SolverConfig& cfg);

struct ReciprocalFit {
    double t_max;
    double sigma_t;        // 1-sigma from the fit covariance (delta method)
    double slope;          // of 1/norm vs t; negative for genuine blowup
    double rel_residual;   // rms residual / mean |1/norm|
    std::size_t samples;
};

/// Least-squares line through (t, 1/norm) over the samples with
/// norm >= max_norm / 10; t_max is the zero crossing.
/// Throws std::runtime_error with fewer than 5 such samples.
ReciprocalFit fit_reciprocal_norm(const std::vector<double>& times,
                                  const std::vector<double>& norms);

/// Blowup-time estimate with confidence interval, from the reciprocal-norm
/// fit over the final decade of samples. The interval combines the fit
/// covariance, the spread against a final-half-decade refit, and a floor
/// proportional to rel_tol * t_max (integrator bias the fit cannot see).
/// Throws std::runtime_error if the trajectory did not cross the threshold
/// or has too few samples in the final decade.
template <class State>
BlowupEstimate estimate_blowup_time(const Trajectory<State>& traj);

BlowupEstimate estimate_blowup_time(const std::vector<double>& times,
                                    const std::vector<double>& norms, double rel_tol);

/// sup |(t_max_est - t) lambda - 1| over the final decade; requires blowup
/// termination.
double lambda_asymptotic_check(const Trajectory<ParamState>& traj, double t_max_est);
double lambda_asymptotic_check(const Trajectory<ComplexPairState>& traj, double t_max_est);

}  // namespace linflow

#endif  // LINFLOW_DYNAMICS_HPP
