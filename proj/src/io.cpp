#include "linflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "linflow/closed_forms.hpp"

namespace linflow::io {

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const TimeSeries& ts) {
    for (std::size_t j = 0; j < ts.columns.size(); ++j) {
        if (j) os << ',';
        os << ts.columns[j];
    }
    os << '\n';
    for (const auto& row : ts.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ',';
            os << format_full(row[j]);
        }
        os << '\n';
    }
}

void write_csv_file(const std::string& path, const TimeSeries& ts) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_csv(f, ts);
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

TimeSeries read_csv(std::istream& is) {
    TimeSeries ts;
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty CSV input");
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) ts.columns.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != ts.columns.size())
            throw IoError("CSV row width does not match the header");
        ts.rows.push_back(std::move(row));
    }
    return ts;
}

TimeSeries read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    return read_csv(f);
}

TimeSeries aligned_series(const Trajectory<ParamState>& traj) {
    TimeSeries ts;
    ts.columns = {"t", "lambda", "r", "k", "g", "frob_norm", "trace_sq"};
    ts.rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const ParamState& s = traj.states[i];
        const double p = s.r_plus_2;
        // tr(M^2) = |S|^2 - |w|^2/2 = (2p^2 - 6p + 6 - 2k^2) lambda^2
        const double tr_sq =
            (2.0 * p * p - 6.0 * p + 6.0 - 2.0 * s.k * s.k) * s.lambda * s.lambda;
        ts.rows.push_back({traj.times[i], s.lambda, s.r(), s.k, s.g(), traj.norms[i], tr_sq});
    }
    return ts;
}

TimeSeries matrix_series(const Trajectory<Mat3>& traj) {
    TimeSeries ts;
    ts.columns = {"t",   "m11", "m12", "m13", "m21", "m22",
                  "m23", "m31", "m32", "m33", "frob_norm"};
    ts.rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Mat3& m = traj.states[i];
        std::vector<double> row{traj.times[i]};
        row.insert(row.end(), m.m.begin(), m.m.end());
        row.push_back(traj.norms[i]);
        ts.rows.push_back(std::move(row));
    }
    return ts;
}

const char* termination_name(TerminationKind kind) {
    switch (kind) {
        case TerminationKind::horizon_reached: return "horizon_reached";
        case TerminationKind::blowup: return "blowup";
        case TerminationKind::step_underflow: return "step_underflow";
    }
    return "?";
}

std::optional<double> m0_drift(const Trajectory<ParamState>& traj) {
    if (traj.states.empty() || traj.states.front().r_plus_2 == 0.0) return std::nullopt;
    const double m0 = traj.states.front().m();
    double drift = 0.0;
    for (const ParamState& s : traj.states) drift = std::max(drift, std::abs(s.m() - m0));
    return drift;
}

std::optional<double> trace_drift(const Trajectory<Mat3>& traj) {
    if (traj.states.empty()) return std::nullopt;
    double drift = 0.0;
    for (const Mat3& m : traj.states)
        drift = std::max(drift, std::abs(trace(m)) / (1.0 + frobenius_norm(m)));
    return drift;
}

std::optional<double> boundary_c_drift(const Trajectory<ParamState>& traj) {
    if (traj.states.empty()) return std::nullopt;
    const ParamState& s0 = traj.states.front();
    if (!(s0.r() > 0.0)) return std::nullopt;
    const double m0 = s0.m();
    if (std::abs(m0 * m0 - 0.25) > 1e-12) return std::nullopt;
    const double c0 = boundary_invariant(s0.lambda, s0.r());
    double drift = 0.0;
    for (const ParamState& s : traj.states) {
        if (!(s.r() > 0.0)) continue;
        drift = std::max(drift, std::abs(boundary_invariant(s.lambda, s.r()) - c0) / c0);
    }
    return drift;
}

namespace {

nlohmann::json opt_num(std::optional<double> v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

nlohmann::json run_summary(const nlohmann::json& input, const Termination& termination,
                           std::optional<double> m0_drift_v, std::optional<double> trace_drift_v,
                           std::optional<double> boundary_c_drift_v,
                           std::size_t samples_written) {
    nlohmann::json j;
    j["input"] = input;
    j["termination"] = termination_name(termination.kind);
    if (termination.blowup) {
        j["t_max_estimate"] = termination.blowup->t_max;
        j["t_max_interval"] = {termination.blowup->lower, termination.blowup->upper};
    } else {
        j["t_max_estimate"] = nullptr;
        j["t_max_interval"] = nullptr;
    }
    j["invariant_drifts"] = {{"m0", opt_num(m0_drift_v)},
                             {"trace", opt_num(trace_drift_v)},
                             {"boundary_c", opt_num(boundary_c_drift_v)}};
    j["samples_written"] = samples_written;
    return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    nlohmann::json j;
    f >> j;
    return j;
}

}  // namespace linflow::io
