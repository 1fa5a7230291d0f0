#include "linflow/classifier.hpp"

#include <cmath>
#include <stdexcept>

namespace linflow {

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::family_blowup: return "family_blowup";
        case CaseTag::family_stationary: return "family_stationary";
        case CaseTag::family_decay: return "family_decay";
        case CaseTag::case1: return "case1";
        case CaseTag::case2: return "case2";
        case CaseTag::case3_boundary: return "case3_boundary";
        case CaseTag::case4: return "case4";
        case CaseTag::case5: return "case5";
        case CaseTag::case6: return "case6";
        case CaseTag::general_blowup: return "general_blowup";
        case CaseTag::outside_hypothesis: return "outside_hypothesis";
    }
    return "?";
}

const char* to_string(LambdaLimit limit) {
    switch (limit) {
        case LambdaLimit::finite: return "finite";
        case LambdaLimit::infinity_at_finite_time: return "infinity_at_finite_time";
        case LambdaLimit::infinity_at_infinite_time: return "infinity_at_infinite_time";
    }
    return "?";
}

double f_poly(double r, double m0) {
    const double rp2 = r + 2.0;
    return -1.0 + 2.0 * r + 2.0 * r * r + m0 * m0 * rp2 * rp2;
}

double g_poly(double r, double m0) {
    const double rp2 = r + 2.0;
    return 1.0 + r - 2.0 * r * r - m0 * m0 * rp2 * rp2;
}

FatePrediction classify_aligned(const AlignedParams& p0) {
    if (!(p0.lambda > 0.0)) throw std::domain_error("classify_aligned: lambda0 must be positive");
    const double r = p0.r, k = p0.k;
    const double g = g_defect(r, k);
    FatePrediction out;

    if (g == 0.0) {
        // Invariant family: r, k frozen, d(lambda)/dt = r lambda^2.
        out.limits = std::make_pair(r, k);
        if (r > 0.0) {
            out.tag = CaseTag::family_blowup;
            out.finite_blowup = true;
            out.lambda_limit = LambdaLimit::infinity_at_finite_time;
            out.t_max_exact = 1.0 / (r * p0.lambda);
        } else if (r == 0.0) {
            out.tag = CaseTag::family_stationary;
            out.lambda_limit = LambdaLimit::finite;
        } else {
            out.tag = CaseTag::family_decay;
            out.lambda_limit = LambdaLimit::finite;
        }
        return out;
    }

    const double rp2 = r + 2.0;
    const double q = k * k - 0.25 * rp2 * rp2;  // sign against the boundary parabola

    if (r > 0.0) {
        if (q > 0.0) {
            out.tag = CaseTag::case4;
        } else if (q == 0.0) {
            out.tag = CaseTag::case3_boundary;
        } else if (g < 0.0) {
            out.tag = CaseTag::case1;
        } else {
            out.tag = CaseTag::case2;  // g > 0 forces 0 < r < 1
        }
    } else if (r >= -0.5) {
        out.tag = g > 0.0 ? CaseTag::case2 : CaseTag::case5;
    } else {
        out.tag = CaseTag::case6;
    }

    switch (out.tag) {
        case CaseTag::case1:
        case CaseTag::case2: {
            const LimitConstants lc = limit_constants(k / rp2);
            out.finite_blowup = true;
            out.lambda_limit = LambdaLimit::infinity_at_finite_time;
            out.limits = std::make_pair(lc.r_inf, lc.k_inf);
            break;
        }
        case CaseTag::case3_boundary: {
            out.finite_blowup = false;
            out.lambda_limit = LambdaLimit::infinity_at_infinite_time;
            out.limits = std::make_pair(0.0, 2.0 * (k / rp2));  // k -> +-1
            break;
        }
        default: {  // case4 / case5 / case6 (incl. the frozen r0 = -2 line)
            out.finite_blowup = true;
            out.lambda_limit = LambdaLimit::infinity_at_finite_time;
            out.limits = std::make_pair(-2.0, 0.0);
            break;
        }
    }
    return out;
}

FatePrediction classify_general(const TraceFreeMatrix& m0, double tol) {
    const double fnorm = m0.frobenius_norm();
    const double atol = tol * (1.0 + fnorm);

    // Aligned-manifold detection: diagonal strain, vorticity along e2, and a
    // positive third strain eigenvalue give a (lambda, r, k) chart.
    const StrainVorticityPair pair = decompose(m0);
    const SymMat3& s = pair.strain();
    const Vec3 w = pair.vorticity();
    if (std::abs(s.xy) <= atol && std::abs(s.xz) <= atol && std::abs(s.yz) <= atol &&
        std::abs(w.x) <= atol && std::abs(w.z) <= atol && s.zz > atol) {
        const double lambda0 = s.zz;
        return classify_aligned({lambda0, s.yy / lambda0, 0.5 * w.y / lambda0});
    }

    const JordanDecomposition jd = jordan_decompose(m0, tol);
    double rho_max = 0.0;
    for (const auto& e : jd.eigenvalues) rho_max = std::max(rho_max, std::abs(e));
    const double scale = 1.0 + rho_max;

    FatePrediction out;
    out.ill_conditioned = jd.ill_conditioned;
    const double re_gap = jd.eigenvalues[1].real() - jd.eigenvalues[0].real();
    if (!(re_gap > tol * scale)) {
        out.tag = CaseTag::outside_hypothesis;
        return out;
    }

    out.tag = CaseTag::general_blowup;
    out.finite_blowup = true;
    out.lambda_limit = LambdaLimit::infinity_at_finite_time;
    out.blowup_profile = jd.q * Mat3::diag(-2.0, 1.0, 1.0) * inverse(jd.q);
    if (jd.cls == SpectralClass::defective_repeated) {
        // Closed form: the repeated eigenvalue obeys d(lambda)/dt = lambda^2
        // regardless of the off-diagonal coefficient.
        const double rep = *jd.repeated_eigenvalue();
        if (rep > 0.0) out.t_max_exact = 1.0 / rep;
    }
    return out;
}

double case_boundary_distance(double r0, double k0) {
    const double ak = std::abs(k0);
    // g = 0 curve.
    const double g = g_defect(r0, ak);
    const double gx = 1.0 - 4.0 * r0, gy = -2.0 * ak;
    const double dg = std::abs(g) / std::max(std::hypot(gx, gy), 1e-30);
    // Boundary parabola k^2 = (r+2)^2 / 4 (meaningful for r > 0; treated
    // globally, it only tightens the margin).
    const double q = ak * ak - 0.25 * (r0 + 2.0) * (r0 + 2.0);
    const double qx = -0.5 * (r0 + 2.0), qy = 2.0 * ak;
    const double dq = std::abs(q) / std::max(std::hypot(qx, qy), 1e-30);
    // Case edges in r.
    const double dr0 = std::abs(r0);
    const double drh = std::abs(r0 + 0.5);
    return std::min(std::min(dg, dq), std::min(dr0, drh));
}

SolverConfig verification_config(const FatePrediction& pred, double lambda0) {
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    // Pure relative control: k and r+2 decay to ~1e-18 of themselves on the
    // r -> -2 attractor and must stay accurate in relative terms.
    cfg.abs_tol = 1e-100;
    if (pred.finite_blowup) {
        cfg.t_end = 400.0 / lambda0;
        cfg.blowup_norm_threshold = 1e7;
    } else if (pred.tag == CaseTag::family_stationary) {
        cfg.t_end = 100.0 / lambda0;
    } else {
        cfg.t_end = 1000.0 / lambda0;  // boundary / decay cases observe at the horizon
        cfg.sample_times = {cfg.t_end / 100.0, cfg.t_end / 10.0};
    }
    return cfg;
}

namespace {

void add_check(VerifyReport& rep, const std::string& name, double predicted, double observed,
               double tol) {
    CheckLine line{name, predicted, observed, tol, std::abs(observed - predicted) <= tol};
    rep.passed = rep.passed && line.pass;
    rep.checks.push_back(std::move(line));
}

// Last sample with lambda >= 1e6.
std::optional<std::size_t> gate_index(const Trajectory<ParamState>& traj) {
    for (std::size_t i = traj.states.size(); i-- > 0;)
        if (traj.states[i].lambda >= 1e6) return i;
    return std::nullopt;
}

bool expect_blowup_detected(VerifyReport& rep, const Termination& term) {
    if (term.kind == TerminationKind::blowup) {
        add_check(rep, "finite blowup detected", 1.0, 1.0, 0.5);
        return true;
    }
    if (term.kind == TerminationKind::step_underflow) {
        rep.inconclusive = true;
        rep.note = "integration stopped by step underflow before the observation gate";
        return false;
    }
    add_check(rep, "finite blowup detected", 1.0, 0.0, 0.5);
    return false;
}

}  // namespace

VerifyReport verify_prediction(const FatePrediction& pred, const Trajectory<ParamState>& traj,
                               double tol) {
    VerifyReport rep;
    rep.passed = true;
    if (traj.states.empty()) {
        rep.inconclusive = true;
        rep.note = "empty trajectory";
        return rep;
    }
    const ParamState& first = traj.states.front();
    const ParamState& last = traj.states.back();

    switch (pred.tag) {
        case CaseTag::family_blowup:
        case CaseTag::case1:
        case CaseTag::case2:
        case CaseTag::case4:
        case CaseTag::case5:
        case CaseTag::case6: {
            if (!expect_blowup_detected(rep, traj.termination)) return rep;
            const auto gate = gate_index(traj);
            if (!gate) {
                rep.inconclusive = true;
                rep.note = "no sample with lambda >= 1e6";
                return rep;
            }
            const ParamState& obs = traj.states[*gate];
            add_check(rep, "r limit", pred.limits->first, obs.r(), tol);
            add_check(rep, "k limit", pred.limits->second, obs.k, tol);
            if (pred.t_max_exact) {
                const double t_est = traj.termination.blowup->t_max;
                add_check(rep, "t_max (relative)", 1.0, t_est / *pred.t_max_exact, tol);
            }
            break;
        }
        case CaseTag::family_stationary: {
            double drift = 0.0;
            for (const ParamState& s : traj.states) {
                drift = std::max(drift, std::abs(s.lambda - first.lambda));
                drift = std::max(drift, std::abs(s.r_plus_2 - first.r_plus_2));
                drift = std::max(drift, std::abs(s.k - first.k));
            }
            add_check(rep, "stationary drift", 0.0, drift, 1e-10 * (1.0 + first.lambda));
            break;
        }
        case CaseTag::family_decay: {
            if (traj.termination.kind == TerminationKind::blowup) {
                add_check(rep, "no finite blowup", 1.0, 0.0, 0.5);
                return rep;
            }
            const double t_f = traj.times.back();
            // lambda(t) * t -> -1/r for r < 0.
            add_check(rep, "decay rate lambda*t*(-r)", 1.0,
                      last.lambda * t_f * (-first.r()), std::max(tol, 2.0 / (-first.r() * first.lambda * t_f)));
            break;
        }
        case CaseTag::case3_boundary: {
            if (traj.termination.kind == TerminationKind::blowup) {
                add_check(rep, "no finite blowup", 1.0, 0.0, 0.5);
                return rep;
            }
            if (traj.termination.kind == TerminationKind::step_underflow) {
                rep.inconclusive = true;
                rep.note = "integration stopped by step underflow before the horizon";
                return rep;
            }
            add_check(rep, "no finite blowup", 1.0, 1.0, 0.5);
            // Blowup at infinity: lambda grows by 10x over the last two
            // decades of the horizon.
            const double t_early = traj.times.back() / 100.0;
            double lam_early = first.lambda;
            for (std::size_t i = 0; i < traj.times.size(); ++i)
                if (traj.times[i] >= t_early) {
                    lam_early = traj.states[i].lambda;
                    break;
                }
            const double ratio = last.lambda / lam_early;
            CheckLine growth{"lambda growth ratio > 10", 10.0, ratio, 0.0, ratio > 10.0};
            rep.passed = rep.passed && growth.pass;
            rep.checks.push_back(growth);
            add_check(rep, "r limit", pred.limits->first, last.r(), tol);
            add_check(rep, "k limit", pred.limits->second, last.k, tol);
            break;
        }
        default: {
            rep.inconclusive = true;
            rep.note = "prediction tag not applicable to aligned trajectories";
            break;
        }
    }
    return rep;
}

VerifyReport verify_prediction(const FatePrediction& pred, const Trajectory<Mat3>& traj,
                               double tol) {
    VerifyReport rep;
    rep.passed = true;
    if (traj.states.empty()) {
        rep.inconclusive = true;
        rep.note = "empty trajectory";
        return rep;
    }

    if (pred.tag == CaseTag::outside_hypothesis) {
        rep.note = "outside the spectral hypothesis: no prediction to verify";
        return rep;
    }

    if (pred.tag == CaseTag::general_blowup) {
        if (!expect_blowup_detected(rep, traj.termination)) return rep;
        const double t_est = traj.termination.blowup->t_max;
        const double t_f = traj.times.back();
        const Mat3& m_f = traj.states.back();
        const Mat3& profile = *pred.blowup_profile;
        const double err = frobenius_norm((t_est - t_f) * m_f - profile);
        add_check(rep, "blowup profile |(T-t)M - P|/|P|", 0.0,
                  err / frobenius_norm(profile), tol);
        if (pred.t_max_exact) {
            add_check(rep, "t_max (relative)", 1.0, t_est / *pred.t_max_exact, tol);
        }
        return rep;
    }

    // Delegated aligned tags, observed through the decomposed matrix states.
    Trajectory<ParamState> aligned;
    aligned.times = traj.times;
    aligned.termination = traj.termination;
    aligned.rel_tol_used = traj.rel_tol_used;
    aligned.states.reserve(traj.states.size());
    for (const Mat3& m : traj.states) {
        const StrainVorticityPair p = decompose(TraceFreeMatrix::project(m));
        const double lam = p.strain().zz;
        aligned.states.push_back(
            {lam, p.strain().yy / lam + 2.0, 0.5 * p.vorticity().y / lam});
    }
    return verify_prediction(pred, aligned, tol);
}

}  // namespace linflow
