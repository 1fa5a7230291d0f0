#ifndef LINFLOW_DETAIL_DRIVER_HPP
#define LINFLOW_DETAIL_DRIVER_HPP

#include <algorithm>
#include <vector>

#include "linflow/detail/rk45.hpp"
#include "linflow/dynamics.hpp"

// Shared plumbing between the typed integrators: sample recording with
// stride thinning, checkpoint handling, and termination resolution.

namespace linflow::detail {

// The first sample, caller-requested times, and everything in the final norm
// decade are never dropped; the rest is thinned with a doubling stride once
// max_samples is hit.
template <class State>
class Recorder {
  public:
    Recorder(Trajectory<State>& traj, const SolverConfig& cfg,
             const std::vector<double>& checkpoints)
        : traj_(traj), cfg_(cfg), checkpoints_(checkpoints),
          decade_gate_(cfg.blowup_norm_threshold / 10.0) {}

    void record(double t, const State& s, double n) {
        const bool requested =
            std::binary_search(checkpoints_.begin(), checkpoints_.end(), t);
        const bool forced = traj_.times.empty() || requested || n >= decade_gate_;
        if (!forced && (counter_++ % stride_) != 0) return;
        traj_.times.push_back(t);
        traj_.states.push_back(s);
        traj_.norms.push_back(n);
        droppable_.push_back(forced ? 0 : 1);
        if (traj_.times.size() >= cfg_.max_samples) thin();
    }

  private:
    void thin() {
        std::size_t keep = 0, parity = 0;
        for (std::size_t i = 0; i < traj_.times.size(); ++i) {
            bool drop = false;
            if (droppable_[i]) drop = (parity++ % 2) != 0;
            if (drop) continue;
            traj_.times[keep] = traj_.times[i];
            traj_.states[keep] = traj_.states[i];
            traj_.norms[keep] = traj_.norms[i];
            droppable_[keep] = droppable_[i];
            ++keep;
        }
        traj_.times.resize(keep);
        traj_.states.resize(keep);
        traj_.norms.resize(keep);
        droppable_.resize(keep);
        stride_ *= 2;
    }

    Trajectory<State>& traj_;
    const SolverConfig& cfg_;
    const std::vector<double>& checkpoints_;
    double decade_gate_;
    std::size_t stride_ = 1;
    std::size_t counter_ = 1;  // sample 0 is recorded unconditionally
    std::vector<char> droppable_;
};

inline std::vector<double> sorted_checkpoints(const SolverConfig& cfg) {
    std::vector<double> cps;
    for (double t : cfg.sample_times)
        if (t > 0.0 && t <= cfg.t_end) cps.push_back(t);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return cps;
}

// Integrates, records, and resolves the termination kind.
//   project(y, traj) -> bool   post-step renormalization (true if y changed)
//   guard(y_old, y_new)        false rejects a step outright
template <std::size_t N, class State, class Rhs, class Project, class Guard, class Pack,
          class Unpack>
Trajectory<State> run_integration(const SolverConfig& cfg, const State& s0, Rhs&& rhs,
                                  Project&& project, Guard&& guard, Pack&& pack,
                                  Unpack&& unpack) {
    cfg.validate();
    Trajectory<State> traj;
    traj.rel_tol_used = cfg.rel_tol;
    const std::vector<double> cps = sorted_checkpoints(cfg);
    Recorder<State> rec(traj, cfg, cps);

    StateArray<N> y = pack(s0);
    double t = 0.0;
    rec.record(0.0, s0, state_norm(s0));

    StepControl ctl{cfg.rel_tol, cfg.abs_tol, cfg.min_step(), cfg.t_end};
    StepStats stats;
    const auto norm_of = [&](const StateArray<N>& a) { return state_norm(unpack(a)); };
    const auto on_accept = [&](double tt, StateArray<N>& a) {
        const bool changed = project(a, traj);
        const State s = unpack(a);
        rec.record(tt, s, state_norm(s));
        return changed;
    };

    const StopReason stop = integrate_adaptive<N>(rhs, y, t, cfg.t_end, ctl,
                                                  cfg.blowup_norm_threshold, norm_of,
                                                  on_accept, guard, cps, stats);
    traj.steps_accepted = stats.accepted;
    traj.steps_rejected = stats.rejected;

    switch (stop) {
        case StopReason::reached_end:
            traj.termination.kind = TerminationKind::horizon_reached;
            break;
        case StopReason::step_underflow:
            traj.termination.kind = TerminationKind::step_underflow;
            break;
        case StopReason::norm_threshold: {
            // Declare blowup only when the reciprocal norm extrapolates
            // cleanly; anything else is reported as step_underflow rather
            // than mislabeled.
            try {
                const BlowupEstimate est =
                    estimate_blowup_time(traj.times, traj.norms, cfg.rel_tol);
                traj.termination.kind = TerminationKind::blowup;
                traj.termination.blowup = est;
            } catch (const std::runtime_error&) {
                traj.termination.kind = TerminationKind::step_underflow;
            }
            break;
        }
    }
    return traj;
}

}  // namespace linflow::detail

#endif  // LINFLOW_DETAIL_DRIVER_HPP
