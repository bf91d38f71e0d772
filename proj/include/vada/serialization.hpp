#pragma once
// CSV and JSON emission for series and records. Doubles are written in the
// shortest decimal form that parses back to the same value.

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "vada/antagonistic_core.hpp"
#include "vada/error.hpp"
#include "vada/impedance_dynamics.hpp"

namespace vada {

inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(Errc::config_parse, "not a number: '" + text + "'");
  return value;
}

/// JSON number, or null for non-finite values.
inline nlohmann::json number_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

inline constexpr const char* trajectory_csv_header = "t,nu,v1,v2,F,F_ext";

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << trajectory_csv_header << '\n';
  for (const auto& s : traj.samples)
    os << format_double(s.t) << ',' << format_double(s.nu) << ',' << format_double(s.v1) << ','
       << format_double(s.v2) << ',' << format_double(s.force) << ',' << format_double(s.external_force)
       << '\n';
}

inline std::vector<TrajectorySample> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != trajectory_csv_header)
    throw Error(Errc::config_parse, "trajectory CSV must start with the header row");
  std::vector<TrajectorySample> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(parse_double(cell));
    if (cols.size() != 6) throw Error(Errc::config_parse, "trajectory row needs 6 columns");
    out.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5]});
  }
  return out;
}

inline nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : traj.samples)
    rows.push_back({s.t, s.nu, s.v1, s.v2, s.force, s.external_force});
  return {{"integrator", traj.integrator},
          {"dt", traj.dt},
          {"columns", {"t", "nu", "v1", "v2", "F", "F_ext"}},
          {"samples", rows}};
}

struct FiberRow {
  CommandPair point;
  double task_residual = 0.0;
  double passive_coeff = 0.0;
  double promptness = 0.0;
};

inline constexpr const char* fiber_csv_header = "u1,u2,task_residual,passive_coeff,promptness";

inline void write_fiber_csv(std::ostream& os, const std::vector<FiberRow>& rows) {
  os << fiber_csv_header << '\n';
  for (const auto& r : rows)
    os << format_double(r.point.u1) << ',' << format_double(r.point.u2) << ','
       << format_double(r.task_residual) << ',' << format_double(r.passive_coeff) << ','
       << format_double(r.promptness) << '\n';
}

}  // namespace vada
