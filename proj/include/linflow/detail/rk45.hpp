#ifndef LINFLOW_DETAIL_RK45_HPP
#define LINFLOW_DETAIL_RK45_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

// Dormand-Prince 5(4) embedded pair with FSAL, adaptive step control, exact
// landing on requested checkpoint times, and hooks for post-step projection
// and step guards. The systems integrated here are smooth polynomial ODEs in
// at most 9 variables, so a fifth-order pair with a standard controller is
// the whole story; stiffness never enters.

namespace linflow::detail {

template <std::size_t N>
using StateArray = std::array<double, N>;

// Tableau (Dormand & Prince 1980). e = b5 - b4 row, used for the embedded
// error estimate.
inline constexpr double DP_C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double DP_A21 = 1.0 / 5;
inline constexpr double DP_A31 = 3.0 / 40, DP_A32 = 9.0 / 40;
inline constexpr double DP_A41 = 44.0 / 45, DP_A42 = -56.0 / 15, DP_A43 = 32.0 / 9;
inline constexpr double DP_A51 = 19372.0 / 6561, DP_A52 = -25360.0 / 2187,
                        DP_A53 = 64448.0 / 6561, DP_A54 = -212.0 / 729;
inline constexpr double DP_A61 = 9017.0 / 3168, DP_A62 = -355.0 / 33,
                        DP_A63 = 46732.0 / 5247, DP_A64 = 49.0 / 176,
                        DP_A65 = -5103.0 / 18656;
inline constexpr double DP_B1 = 35.0 / 384, DP_B3 = 500.0 / 1113, DP_B4 = 125.0 / 192,
                        DP_B5 = -2187.0 / 6784, DP_B6 = 11.0 / 84;
inline constexpr double DP_E1 = 71.0 / 57600, DP_E3 = -71.0 / 16695, DP_E4 = 71.0 / 1920,
                        DP_E5 = -17253.0 / 339200, DP_E6 = 22.0 / 525, DP_E7 = -1.0 / 40;

// One 5th-order step from (t, y) with derivative k1 = f(t, y) already known.
// On return: y5 is the 5th-order solution at t+h, err the embedded error
// vector, k7 = f(t+h, y5) (FSAL derivative for the next step).
template <std::size_t N, class Rhs>
void dopri5_step(Rhs&& rhs, double t, const StateArray<N>& y, double h,
                 const StateArray<N>& k1, StateArray<N>& y5, StateArray<N>& err,
                 StateArray<N>& k7) {
    StateArray<N> k2, k3, k4, k5, k6, tmp;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * DP_A21 * k1[i];
    rhs(t + DP_C[1] * h, tmp, k2);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (DP_A31 * k1[i] + DP_A32 * k2[i]);
    rhs(t + DP_C[2] * h, tmp, k3);

    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (DP_A41 * k1[i] + DP_A42 * k2[i] + DP_A43 * k3[i]);
    rhs(t + DP_C[3] * h, tmp, k4);

    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (DP_A51 * k1[i] + DP_A52 * k2[i] + DP_A53 * k3[i] + DP_A54 * k4[i]);
    rhs(t + DP_C[4] * h, tmp, k5);

    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (DP_A61 * k1[i] + DP_A62 * k2[i] + DP_A63 * k3[i] +
                             DP_A64 * k4[i] + DP_A65 * k5[i]);
    rhs(t + DP_C[5] * h, tmp, k6);

    for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + h * (DP_B1 * k1[i] + DP_B3 * k3[i] + DP_B4 * k4[i] + DP_B5 * k5[i] +
                            DP_B6 * k6[i]);
    rhs(t + h, y5, k7);

    for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (DP_E1 * k1[i] + DP_E3 * k3[i] + DP_E4 * k4[i] + DP_E5 * k5[i] +
                      DP_E6 * k6[i] + DP_E7 * k7[i]);
}

template <std::size_t N>
double error_ratio(const StateArray<N>& y, const StateArray<N>& y_new,
                   const StateArray<N>& err, double rel_tol, double abs_tol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double q = err[i] / sc;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(N));
}

enum class StopReason { reached_end, norm_threshold, step_underflow };

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

struct StepControl {
    double rel_tol;
    double abs_tol;
    double min_step;
    double max_step;
};

// Crude but robust initial step from the scaled sizes of y and f(0, y).
template <std::size_t N>
double initial_step(const StateArray<N>& y, const StateArray<N>& f, const StepControl& ctl) {
    double ny = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
        ny += (y[i] / sc) * (y[i] / sc);
        nf += (f[i] / sc) * (f[i] / sc);
    }
    double h = 1e-2 * std::sqrt(ny / nf);
    if (!std::isfinite(h) || h <= 0.0) h = 1e-3 * ctl.max_step;
    return std::clamp(h, ctl.min_step, ctl.max_step);
}

// Adaptive driver.
//   rhs(t, y, dy)                      -- derivative
//   norm_of(y) -> double               -- norm driving the blowup threshold
//   on_accept(t, y&) -> bool           -- record sample; may project y in
//                                         place, returning true (invalidates
//                                         the FSAL derivative)
//   guard(y_old, y_new) -> bool        -- false rejects the step outright
// checkpoints must be sorted ascending, within (t0, t_end]; the driver lands
// on each exactly. Integration stops at t_end, at norm >= norm_threshold, or
// when the controller cannot proceed with h >= min_step.
template <std::size_t N, class Rhs, class Norm, class OnAccept, class Guard>
StopReason integrate_adaptive(Rhs&& rhs, StateArray<N>& y, double& t, double t_end,
                              const StepControl& ctl, double norm_threshold, Norm&& norm_of,
                              OnAccept&& on_accept, Guard&& guard,
                              const std::vector<double>& checkpoints, StepStats& stats) {
    StateArray<N> k1, k7, y5, err;
    rhs(t, y, k1);
    double h = initial_step<N>(y, k1, ctl);

    std::size_t cp = 0;
    while (cp < checkpoints.size() && checkpoints[cp] <= t) ++cp;

    while (t < t_end) {
        // Land exactly on the next checkpoint / the horizon.
        double target = t_end;
        bool targeted = true;
        if (cp < checkpoints.size() && checkpoints[cp] < t_end) target = checkpoints[cp];
        if (t + h < target) {
            targeted = false;
        } else {
            h = target - t;
        }
        if (h < ctl.min_step && !targeted) return StopReason::step_underflow;

        dopri5_step<N>(rhs, t, y, h, k1, y5, err, k7);
        const double ratio = error_ratio<N>(y, y5, err, ctl.rel_tol, ctl.abs_tol);

        if (!(ratio <= 1.0) || !guard(y, y5)) {
            // Reject: shrink and retry. Non-finite ratios fall here too.
            ++stats.rejected;
            double shrink = std::isfinite(ratio) && ratio > 0.0
                                ? std::max(0.2, 0.9 * std::pow(ratio, -0.2))
                                : 0.2;
            h *= std::min(shrink, 0.9);
            if (h < ctl.min_step) return StopReason::step_underflow;
            continue;
        }

        ++stats.accepted;
        t = targeted ? target : t + h;
        y = y5;
        const bool modified = on_accept(t, y);
        if (modified)
            rhs(t, y, k1);
        else
            k1 = k7;

        if (norm_of(y) >= norm_threshold) return StopReason::norm_threshold;
        if (cp < checkpoints.size() && t >= checkpoints[cp]) ++cp;

        const double grow =
            ratio > 0.0 ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0) : 5.0;
        h = std::min(h * grow, ctl.max_step);
    }
    return StopReason::reached_end;
}

// Fixed-step integration with the same stages; used by the order-convergence
// tests.
template <std::size_t N, class Rhs>
StateArray<N> integrate_fixed(Rhs&& rhs, StateArray<N> y, double t0, double t1, int nsteps) {
    const double h = (t1 - t0) / nsteps;
    StateArray<N> k1, k7, y5, err;
    double t = t0;
    rhs(t, y, k1);
    for (int i = 0; i < nsteps; ++i) {
        dopri5_step<N>(rhs, t, y, h, k1, y5, err, k7);
        y = y5;
        k1 = k7;
        t = t0 + (i + 1) * h;
    }
    return y;
}

}  // namespace linflow::detail

#endif  // LINFLOW_DETAIL_RK45_HPP
