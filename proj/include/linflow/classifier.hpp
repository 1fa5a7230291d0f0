#ifndef LINFLOW_CLASSIFIER_HPP
#define LINFLOW_CLASSIFIER_HPP

#include <optional>
#include <string>
#include <vector>

#include "linflow/dynamics.hpp"
#include "linflow/spectral.hpp"

// Maps initial data to its predicted fate: the invariant-family tags, the six
// eigenframe-aligned cases (partitioned by the defect g = 1 + r - 2r^2 - k^2
// and the boundary parabola k^2 = (r+2)^2/4), and the spectral general case.

namespace linflow {

enum class CaseTag {
    family_blowup,
    family_stationary,
    family_decay,
    case1,
    case2,
    case3_boundary,
    case4,
    case5,
    case6,
    general_blowup,
    outside_hypothesis,
};

const char* to_string(CaseTag tag);

enum class LambdaLimit { finite, infinity_at_finite_time, infinity_at_infinite_time };

const char* to_string(LambdaLimit limit);

struct FatePrediction {
    CaseTag tag = CaseTag::outside_hypothesis;
    bool finite_blowup = false;
    /// Predicted (r, k) limits where the theory gives them.
    std::optional<std::pair<double, double>> limits;
    LambdaLimit lambda_limit = LambdaLimit::finite;
    /// Exact blowup time, when a closed form provides one.
    std::optional<double> t_max_exact;
    /// General case: (T - t) M(t) -> this matrix (= Q diag(-2,1,1) Q^-1).
    std::optional<Mat3> blowup_profile;
    bool ill_conditioned = false;
};

/// Classify eigenframe-aligned initial data (lambda0 > 0). Total: every
/// (r0, k0) receives exactly one tag. Data exactly on a case boundary is
/// classified to the boundary case, never perturbed; data with g = 0 is
/// routed to the invariant-family tags.
FatePrediction classify_aligned(const AlignedParams& p0);

/// Classify arbitrary trace-free initial data through its spectrum. Data
/// within tol of the aligned manifold (diagonal strain, vorticity along e2,
/// positive third strain eigenvalue) delegates to classify_aligned for
/// sharper limits. Otherwise: general_blowup when Re(rho1) < Re(rho2) <=
/// Re(rho3) strictly at tol, outside_hypothesis when the leading real parts
/// tie (no prediction exists there).
FatePrediction classify_general(const TraceFreeMatrix& m0, double tol = 1e-8);

/// f(r) = -1 + 2r + 2r^2 + m0^2 (r+2)^2: sign of d(lambda)/dt / lambda^2.
double f_poly(double r, double m0);
/// g(r) = 1 + r - 2r^2 - m0^2 (r+2)^2 = f(r) - 3r with flipped sign; factors
/// as -(2 + m0^2)(r - r_star)(r - r_inf).
double g_poly(double r, double m0);

/// Approximate distance from (r0, k0) to the nearest case boundary (the
/// g = 0 curve, the parabola k^2 = (r+2)^2/4 for r > 0, and the lines r = 0,
/// r = -1/2); used to exclude margin points from sweep verification.
double case_boundary_distance(double r0, double k0);

struct CheckLine {
    std::string name;
    double predicted = 0.0;
    double observed = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<CheckLine> checks;
    bool passed = false;
    bool inconclusive = false;  // trajectory never reached the observation gate
    std::string note;
};

/// Compare a prediction against an integrated trajectory from the same data.
/// Blowup-case limits are read at the last sample with lambda >= 1e6; global
/// cases at the horizon. Inconclusive when the trajectory terminated by
/// step_underflow (or otherwise short of the gate).
VerifyReport verify_prediction(const FatePrediction& pred, const Trajectory<ParamState>& traj,
                               double tol);

/// Matrix-trajectory variant: checks the general-case profile
/// |(T_est - t) M(t) - P| <= tol |P| at the final sample.
VerifyReport verify_prediction(const FatePrediction& pred, const Trajectory<Mat3>& traj,
                               double tol);

/// Solver configuration suited to observing the predicted fate (thresholds
/// chosen so blowup trajectories pass the lambda >= 1e6 gate, horizons long
/// enough for the global cases).
SolverConfig verification_config(const FatePrediction& pred, double lambda0);

}  // namespace linflow

#endif  // LINFLOW_CLASSIFIER_HPP
