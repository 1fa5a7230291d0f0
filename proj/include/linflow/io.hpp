#ifndef LINFLOW_IO_HPP
#define LINFLOW_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linflow/dynamics.hpp"

// Machine-readable emitters for offline plotting, and the parsers that read
// back exactly what we print. Data files are deterministic: fixed 17
// significant digits, no timestamps.

namespace linflow::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest representation that round-trips a double (17 significant digits).
std::string format_full(double v);

struct TimeSeries {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const TimeSeries& ts);
void write_csv_file(const std::string& path, const TimeSeries& ts);  // throws IoError
TimeSeries read_csv(std::istream& is);
TimeSeries read_csv_file(const std::string& path);

/// Columns t,lambda,r,k,g,frob_norm,trace_sq.
TimeSeries aligned_series(const Trajectory<ParamState>& traj);
/// Columns t,m11,...,m33,frob_norm.
TimeSeries matrix_series(const Trajectory<Mat3>& traj);

const char* termination_name(TerminationKind kind);

/// Max |k/(r+2) - m0| over samples; nullopt when r0 = -2.
std::optional<double> m0_drift(const Trajectory<ParamState>& traj);
/// Max |tr M| / (1 + |M|) over samples.
std::optional<double> trace_drift(const Trajectory<Mat3>& traj);
/// Max relative drift of lambda r^(1/2) (r+2)^(5/6); only for boundary-case
/// data (m0^2 = 1/4 to 1e-12, r0 > 0).
std::optional<double> boundary_c_drift(const Trajectory<ParamState>& traj);

/// The run summary object: input echo, termination, blowup estimate with
/// interval, invariant drifts, sample count.
nlohmann::json run_summary(const nlohmann::json& input, const Termination& termination,
                           std::optional<double> m0_drift_v, std::optional<double> trace_drift_v,
                           std::optional<double> boundary_c_drift_v, std::size_t samples_written);

void write_json_file(const std::string& path, const nlohmann::json& j);  // throws IoError
nlohmann::json read_json_file(const std::string& path);

}  // namespace linflow::io

#endif  // LINFLOW_IO_HPP
