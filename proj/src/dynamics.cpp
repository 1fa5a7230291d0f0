#include "linflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linflow/detail/driver.hpp"

namespace linflow {

void SolverConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("SolverConfig: tolerances must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be positive");
    if (!(blowup_norm_threshold > 1.0))
        throw std::invalid_argument("SolverConfig: blowup_norm_threshold must exceed 1");
    if (!(min_step_factor > 0.0))
        throw std::invalid_argument("SolverConfig: min_step_factor must be positive");
    if (max_samples < 16) throw std::invalid_argument("SolverConfig: max_samples too small");
}

double state_norm(const Mat3& m) { return frobenius_norm(m); }
double state_norm(const PairState& s) {
    return std::sqrt(s.strain.frobenius_norm_sq() + 0.5 * dot(s.vorticity, s.vorticity));
}
double state_norm(const ParamState& s) {
    const double p = s.r_plus_2;
    return s.lambda * std::sqrt(6.0 - 6.0 * p + 2.0 * p * p + 2.0 * s.k * s.k);
}
double state_norm(const ComplexPairState& s) {
    return std::sqrt(6.0 * s.lambda * s.lambda + 2.0 * s.a * s.a);
}

namespace {

using detail::StateArray;
using detail::run_integration;

bool no_guard(const StateArray<9>&, const StateArray<9>&) { return true; }

// ---- matrix system -------------------------------------------------------

StateArray<9> pack_matrix(const Mat3& m) { return m.m; }
Mat3 unpack_matrix(const StateArray<9>& y) { return Mat3{y}; }

void matrix_rhs(double, const StateArray<9>& y, StateArray<9>& dy) {
    const Mat3 m{y};
    const Mat3 m2 = m * m;
    const double third_tr = trace(m2) / 3.0;
    Mat3 d = -m2;
    d(0, 0) += third_tr;
    d(1, 1) += third_tr;
    d(2, 2) += third_tr;
    dy = d.m;
}

// Re-project to trace-free when drift exceeds 1e-10 * |M|.
template <class State>
bool project_trace9(StateArray<9>& y, Trajectory<State>& traj, int d0, int d1, int d2) {
    const double tr = y[d0] + y[d1] + y[d2];
    double nrm_sq = 0.0;
    for (double v : y) nrm_sq += v * v;
    if (std::abs(tr) <= 1e-10 * std::sqrt(nrm_sq)) return false;
    const double third = tr / 3.0;
    y[d0] -= third;
    y[d1] -= third;
    y[d2] -= third;
    ++traj.trace_projections;
    return true;
}

// ---- pair system ---------------------------------------------------------

StateArray<9> pack_pair(const PairState& s) {
    return {s.strain.xx, s.strain.yy, s.strain.zz, s.strain.xy, s.strain.xz,
            s.strain.yz, s.vorticity.x, s.vorticity.y, s.vorticity.z};
}
PairState unpack_pair(const StateArray<9>& y) {
    return {{y[0], y[1], y[2], y[3], y[4], y[5]}, {y[6], y[7], y[8]}};
}

void pair_rhs(double, const StateArray<9>& y, StateArray<9>& dy) {
    const SymMat3 s{y[0], y[1], y[2], y[3], y[4], y[5]};
    const Vec3 w{y[6], y[7], y[8]};
    const double s_sq = s.frobenius_norm_sq();
    const double w_sq = dot(w, w);
    const double diag_shift = s_sq / 3.0 + w_sq / 12.0;

    // dS = -(S^2 - (1/3)|S|^2 I + (1/4) w(x)w - (1/12)|w|^2 I)
    dy[0] = -(s.xx * s.xx + s.xy * s.xy + s.xz * s.xz + 0.25 * w.x * w.x - diag_shift);
    dy[1] = -(s.xy * s.xy + s.yy * s.yy + s.yz * s.yz + 0.25 * w.y * w.y - diag_shift);
    dy[2] = -(s.xz * s.xz + s.yz * s.yz + s.zz * s.zz + 0.25 * w.z * w.z - diag_shift);
    dy[3] = -(s.xx * s.xy + s.xy * s.yy + s.xz * s.yz + 0.25 * w.x * w.y);
    dy[4] = -(s.xx * s.xz + s.xy * s.yz + s.xz * s.zz + 0.25 * w.x * w.z);
    dy[5] = -(s.xy * s.xz + s.yy * s.yz + s.yz * s.zz + 0.25 * w.y * w.z);

    const Vec3 sw = s * w;
    dy[6] = sw.x;
    dy[7] = sw.y;
    dy[8] = sw.z;
}

// ---- aligned parameter system ---------------------------------------------

StateArray<3> pack_params(const ParamState& s) { return {s.lambda, s.r_plus_2, s.k}; }
ParamState unpack_params(const StateArray<3>& y) { return {y[0], y[1], y[2]}; }

void params_rhs(double, const StateArray<3>& y, StateArray<3>& dy) {
    const double lam = y[0], p = y[1], k = y[2];
    const double g = -9.0 + 9.0 * p - 2.0 * p * p - k * k;  // g(r, k) at r = p - 2
    dy[0] = ((p - 2.0) - g / 3.0) * lam * lam;
    dy[1] = (1.0 / 3.0) * lam * g * p;
    dy[2] = (1.0 / 3.0) * lam * g * k;
}

// ---- complex-pair system ---------------------------------------------------

StateArray<3> pack_complex(const ComplexPairState& s) {
    return {s.lambda, s.a, s.lambda_integral};
}
ComplexPairState unpack_complex(const StateArray<3>& y) { return {y[0], y[1], y[2]}; }

void complex_rhs(double, const StateArray<3>& y, StateArray<3>& dy) {
    const double lam = y[0], a = y[1];
    dy[0] = lam * lam + a * a / 3.0;
    dy[1] = -2.0 * lam * a;
    dy[2] = lam;
}

template <std::size_t N>
bool no_project(StateArray<N>&, Trajectory<ParamState>&) {
    return false;
}

}  // namespace

Trajectory<Mat3> integrate_matrix(const TraceFreeMatrix& m0, const SolverConfig& cfg) {
    return run_integration<9, Mat3>(
        cfg, m0.matrix(), matrix_rhs,
        [](StateArray<9>& y, Trajectory<Mat3>& traj) {
            return project_trace9(y, traj, 0, 4, 8);
        },
        no_guard, pack_matrix, unpack_matrix);
}

Trajectory<PairState> integrate_pair(const StrainVorticityPair& p0, const SolverConfig& cfg) {
    const PairState s0{p0.strain(), p0.vorticity()};
    return run_integration<9, PairState>(
        cfg, s0, pair_rhs,
        [](StateArray<9>& y, Trajectory<PairState>& traj) {
            return project_trace9(y, traj, 0, 1, 2);
        },
        no_guard, pack_pair, unpack_pair);
}

Trajectory<ParamState> integrate_params(const AlignedParams& p0, const SolverConfig& cfg) {
    if (!(p0.lambda > 0.0))
        throw std::domain_error("integrate_params: lambda0 must be positive");
    const ParamState s0{p0.lambda, p0.r + 2.0, p0.k};
    // The flow cannot move r+2 across zero (it is a factor of its own
    // derivative); a discrete step that tries is rejected and retried smaller.
    const double p_sign = s0.r_plus_2 > 0.0 ? 1.0 : (s0.r_plus_2 < 0.0 ? -1.0 : 0.0);
    const auto guard = [p_sign](const StateArray<3>&, const StateArray<3>& y_new) {
        if (p_sign == 0.0) return y_new[1] == 0.0;
        return p_sign * y_new[1] > 0.0;
    };
    return run_integration<3, ParamState>(cfg, s0, params_rhs, no_project<3>, guard,
                                          pack_params, unpack_params);
}

Trajectory<ComplexPairState> integrate_complex_params(double lambda0, double a0,
                                                      const SolverConfig& cfg) {
    if (!(lambda0 > 0.0))
        throw std::domain_error("integrate_complex_params: lambda0 must be positive");
    const ComplexPairState s0{lambda0, a0, 0.0};
    return run_integration<3, ComplexPairState>(
        cfg, s0, complex_rhs,
        [](StateArray<3>&, Trajectory<ComplexPairState>&) { return false; },
        [](const StateArray<3>&, const StateArray<3>&) { return true; }, pack_complex,
        unpack_complex);
}

// ---- blowup-time extrapolation ---------------------------------------------

namespace {

ReciprocalFit fit_over_gate(const std::vector<double>& times, const std::vector<double>& norms,
                            double gate) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (norms[i] >= gate) {
            ts.push_back(times[i]);
            ys.push_back(1.0 / norms[i]);
        }
    }
    const std::size_t m = ts.size();
    if (m < 5)
        throw std::runtime_error("fit_reciprocal_norm: too few samples in the final decade");

    // Center times so the normal equations are diagonal.
    double t_mean = 0.0;
    for (double t : ts) t_mean += t;
    t_mean /= static_cast<double>(m);

    double sxx = 0.0, sxy = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = ts[i] - t_mean;
        sxx += x * x;
        sxy += x * ys[i];
        sy += ys[i];
    }
    const double beta = sxy / sxx;
    const double alpha = sy / static_cast<double>(m);
    if (!(beta < 0.0))
        throw std::runtime_error("fit_reciprocal_norm: reciprocal norm is not decreasing");

    double ss_res = 0.0, mean_abs_y = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (alpha + beta * (ts[i] - t_mean));
        ss_res += r * r;
        mean_abs_y += std::abs(ys[i]);
    }
    mean_abs_y /= static_cast<double>(m);
    const double sigma_sq = ss_res / static_cast<double>(m - 2);
    const double var_alpha = sigma_sq / static_cast<double>(m);
    const double var_beta = sigma_sq / sxx;

    const double t_max = t_mean - alpha / beta;
    // T = t_mean - alpha/beta; cov(alpha, beta) = 0 after centering.
    const double var_t =
        var_alpha / (beta * beta) + alpha * alpha * var_beta / (beta * beta * beta * beta);
    const double rel_residual = std::sqrt(ss_res / static_cast<double>(m)) / mean_abs_y;
    return {t_max, std::sqrt(var_t), beta, rel_residual, m};
}

}  // namespace

ReciprocalFit fit_reciprocal_norm(const std::vector<double>& times,
                                  const std::vector<double>& norms) {
    if (times.size() != norms.size() || times.empty())
        throw std::invalid_argument("fit_reciprocal_norm: mismatched or empty samples");
    const double n_max = *std::max_element(norms.begin(), norms.end());
    return fit_over_gate(times, norms, n_max / 10.0);
}

BlowupEstimate estimate_blowup_time(const std::vector<double>& times,
                                    const std::vector<double>& norms, double rel_tol) {
    const ReciprocalFit full = fit_reciprocal_norm(times, norms);
    if (full.rel_residual >= 1e-3)
        throw std::runtime_error("estimate_blowup_time: reciprocal norm is not linear");

    const double n_max = *std::max_element(norms.begin(), norms.end());
    double spread = 0.0;
    try {
        const ReciprocalFit half = fit_over_gate(times, norms, n_max / std::sqrt(10.0));
        spread = std::abs(full.t_max - half.t_max);
    } catch (const std::runtime_error&) {
        // Not enough samples for the refit; the tolerance floor still applies.
    }
    const double halfwidth = 3.0 * full.sigma_t + spread + 10.0 * rel_tol * std::abs(full.t_max);
    return {full.t_max, full.t_max - halfwidth, full.t_max + halfwidth};
}

template <class State>
BlowupEstimate estimate_blowup_time(const Trajectory<State>& traj) {
    if (traj.termination.kind != TerminationKind::blowup)
        throw std::runtime_error("estimate_blowup_time: trajectory did not detect blowup");
    return estimate_blowup_time(traj.times, traj.norms, traj.rel_tol_used);
}

template BlowupEstimate estimate_blowup_time<Mat3>(const Trajectory<Mat3>&);
template BlowupEstimate estimate_blowup_time<PairState>(const Trajectory<PairState>&);
template BlowupEstimate estimate_blowup_time<ParamState>(const Trajectory<ParamState>&);
template BlowupEstimate estimate_blowup_time<ComplexPairState>(
    const Trajectory<ComplexPairState>&);

namespace {

template <class State, class Getter>
double asymptotic_check_impl(const Trajectory<State>& traj, double t_max_est, Getter get) {
    if (traj.termination.kind != TerminationKind::blowup)
        throw std::runtime_error("lambda_asymptotic_check: trajectory did not detect blowup");
    std::vector<double> lams(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) lams[i] = get(traj.states[i]);
    return lambda_asymptotic_check(traj.times, lams, t_max_est);
}

}  // namespace

double lambda_asymptotic_check(const Trajectory<ParamState>& traj, double t_max_est) {
    return asymptotic_check_impl(traj, t_max_est,
                                 [](const ParamState& s) { return s.lambda; });
}

double lambda_asymptotic_check(const Trajectory<ComplexPairState>& traj, double t_max_est) {
    return asymptotic_check_impl(traj, t_max_est,
                                 [](const ComplexPairState& s) { return s.lambda; });
}

}  // namespace linflow
