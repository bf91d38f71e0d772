#pragma once
// Scenario runners behind the `vada` command line tool. Each runner turns a
// parsed RunConfig into a JSON record, optional output files, and an exit
// status: 0 success, 1 domain-level negative result, 2 usage or parse error.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vada/config.hpp"
#include "vada/serialization.hpp"
#include "vada/verify.hpp"

namespace vada {

inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_usage = 2;

struct OutputFile {
  std::string name;
  std::string content;
};

struct ScenarioResult {
  int exit_code = exit_ok;
  json record;
  std::vector<OutputFile> files;
};

inline int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::config_parse:
    case Errc::invalid_geometry:
    case Errc::invalid_model:
    case Errc::invalid_request:
      return exit_usage;
    default:
      return exit_negative;
  }
}

inline ScenarioResult run_derive_coeffs(const RunConfig& cfg) {
  const auto& geom = std::get<RotorGeometry>(cfg.model);
  const auto& p = std::get<DeriveParams>(cfg.params);
  const AffineThrustModel m = closed_form_coefficients(geom);

  ScenarioResult out;
  const double closed = thrust(m, p.sample_speed, p.sample_inflow);
  const double quad = bet_numeric_thrust(geom, p.sample_speed, p.sample_inflow, p.panels);
  out.record = {{"scenario", "derive-coeffs"},
                {"k_thrust", m.k_thrust},
                {"k_inflow", m.k_inflow},
                {"sample", {{"speed", p.sample_speed}, {"inflow", p.sample_inflow}, {"panels", p.panels}}},
                {"closed_form_thrust", closed},
                {"quadrature_thrust", quad},
                {"quadrature_residual", std::abs(quad - closed) / std::max(1.0, std::abs(closed))},
                {"warnings", json::array()}};
  if (geom.pitch_angle == 0.0)
    out.record["warnings"].push_back(
        "pitch_angle is 0: k_thrust vanishes and thrust is no longer monotone in rotor speed");
  return out;
}

namespace scenario_detail {

template <class Plus, class Minus>
ScenarioResult fiber_sweep_on(const AntagonisticActuator<Plus, Minus>& act, const FiberSweepParams& p,
                              json model_info) {
  CommandPair start;
  if (p.start) {
    start = *p.start;
  } else {
    start.u1 = *p.u1_start;
    start.u2 = project_to_fiber(act, start.u1, *p.level, start.u1);
  }
  const FiberPath path = trace_fiber(act, start, p.u1_end, p.steps);

  std::vector<FiberRow> rows;
  for (std::size_t i = 0; i < path.points.size(); ++i)
    rows.push_back({path.points[i], path.residuals[i], passive_coefficient(act, path.points[i]),
                    promptness(act, path.points[i])});
  std::ostringstream csv;
  write_fiber_csv(csv, rows);

  const auto passive = monotonicity_sweep(act, path, SweepQuantity::passive);
  const auto prompt = monotonicity_sweep(act, path, SweepQuantity::promptness);
  const bool vacuous = path.points.size() < 2;
  auto verdict = [vacuous](const MonotonicityReport& r) {
    return vacuous ? "vacuous" : (r.strictly_increasing ? "pass" : "fail");
  };

  ScenarioResult out;
  out.record = {{"scenario", "fiber-sweep"},
                {"model", std::move(model_info)},
                {"level", path.level},
                {"points", path.points.size()},
                {"max_residual", *std::max_element(path.residuals.begin(), path.residuals.end())},
                {"passive_coeff", verdict(passive)},
                {"promptness", verdict(prompt)},
                {"min_increment",
                 {{"passive_coeff", passive.min_increment ? json(*passive.min_increment) : json(nullptr)},
                  {"promptness", prompt.min_increment ? json(*prompt.min_increment) : json(nullptr)}}}};
  out.files.push_back({"fiber.csv", csv.str()});
  if (!vacuous && !(passive.strictly_increasing && prompt.strictly_increasing))
    out.exit_code = exit_negative;
  return out;
}

}  // namespace scenario_detail

inline ScenarioResult run_fiber_sweep(const RunConfig& cfg) {
  const auto& p = std::get<FiberSweepParams>(cfg.params);
  if (const auto* vsa = std::get_if<VsaConfig>(&cfg.model))
    return scenario_detail::fiber_sweep_on(as_antagonistic(*vsa), p, "vsa");
  const DualRotor dr = std::get<DualRotorSpec>(cfg.model).build();
  return scenario_detail::fiber_sweep_on(as_antagonistic_at_trim(dr, p.nu_bar), p,
                                         {{"kind", "dual_rotor"}, {"nu_bar", p.nu_bar}});
}

/// Human-readable verdict line for a fiber sweep record.
inline std::string fiber_verdict_line(const json& record) {
  return "verdict passive_coeff=" + record["passive_coeff"].get<std::string>() +
         " promptness=" + record["promptness"].get<std::string>();
}

inline ScenarioResult run_allocate(const RunConfig& cfg) {
  const auto& p = std::get<AllocateParams>(cfg.params);
  const DualRotor dr = std::get<DualRotorSpec>(cfg.model).build();
  const AllocationResult res = allocate(dr, TrimPoint{p.nu_bar, p.force_level}, p.sigma_des);
  const ModeDecomposition modes = mode_decomposition(res.speeds);

  ScenarioResult out;
  out.record = {{"scenario", "allocate"},
                {"request", {{"force_level", p.force_level}, {"sigma_des", p.sigma_des}, {"nu_bar", p.nu_bar}}},
                {"feasible", res.feasible},
                {"speeds", {res.speeds.u1, res.speeds.u2}},
                {"achieved_force", number_or_null(res.achieved_force)},
                {"achieved_damping", number_or_null(res.achieved_damping)},
                {"common_mode", modes.common},
                {"differential_mode", modes.differential},
                {"method", res.method == AllocationMethod::closed_form ? "closed_form" : "newton"},
                {"iterations", res.iterations}};
  if (!res.feasible) {
    out.record["reason"] = res.reason;
    out.exit_code = exit_negative;
  }
  return out;
}

namespace scenario_detail {

// Least-squares fit of log|nu - nu_inf| = a - t / tau over the samples of one
// constant-input segment. Samples whose deviation has decayed into rounding
// noise are skipped; fewer than three usable samples means no fit.
inline std::optional<double> fit_time_constant(const std::vector<TrajectorySample>& samples,
                                               double t_begin, double t_stop, double nu_inf) {
  double amplitude = 0.0;
  for (const auto& s : samples)
    if (s.t >= t_begin && s.t <= t_stop) {
      amplitude = std::abs(s.nu - nu_inf);
      break;
    }
  const double floor = std::max(1e-12, 1e-6 * amplitude);
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& s : samples) {
    if (s.t < t_begin || s.t > t_stop) continue;
    const double dev = std::abs(s.nu - nu_inf);
    if (!(dev > floor)) continue;
    const double y = std::log(dev);
    n += 1;
    st += s.t;
    sy += y;
    stt += s.t * s.t;
    sty += s.t * y;
  }
  if (n < 3) return std::nullopt;
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  if (!(slope < 0.0)) return std::nullopt;
  return -1.0 / slope;
}

}  // namespace scenario_detail

inline ScenarioResult run_simulate(const RunConfig& cfg) {
  const auto& p = std::get<SimulateParams>(cfg.params);
  const BodyConfig body{p.mass, std::get<DualRotorSpec>(cfg.model).build()};
  const Trajectory traj = simulate(body, p.schedule, p.nu0, p.t_end, p.dt);

  json segments = json::array();
  const auto& segs = p.schedule.segments;
  for (std::size_t i = 0; i < segs.size() && segs[i].t_start < p.t_end; ++i) {
    const double begin = std::max(0.0, segs[i].t_start);
    const double stop = i + 1 < segs.size() ? std::min(segs[i + 1].t_start, p.t_end) : p.t_end;
    const double c = apparent_damping(body, segs[i].speeds);
    const double nu_eq = equilibrium_velocity(body, segs[i].speeds);
    const double nu_inf = nu_eq + segs[i].external_force / c;
    const double tau = body.mass / c;
    const auto fitted = scenario_detail::fit_time_constant(traj.samples, begin, stop, nu_inf);
    segments.push_back({{"t_start", begin},
                        {"t_stop", stop},
                        {"speeds", {segs[i].speeds.u1, segs[i].speeds.u2}},
                        {"f_ext", segs[i].external_force},
                        {"nu_eq", nu_eq},
                        {"c_app", c},
                        {"nu_inf", nu_inf},
                        {"time_constant", tau},
                        {"fitted_time_constant", fitted ? json(*fitted) : json(nullptr)},
                        {"fit_relative_deviation", fitted ? json(std::abs(*fitted - tau) / tau) : json(nullptr)}});
  }

  ScenarioResult out;
  out.record = {{"scenario", "simulate"},
                {"samples", traj.samples.size()},
                {"final", {{"t", traj.samples.back().t}, {"nu", traj.samples.back().nu}}},
                {"segments", segments}};
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  out.files.push_back({"trajectory.csv", csv.str()});
  out.files.push_back({"trajectory.json", trajectory_to_json(traj).dump(2) + "\n"});
  return out;
}

inline ScenarioResult run_verify(const RunConfig& cfg) {
  const auto& p = std::get<VerifyParams>(cfg.params);
  VerifyOptions opt;
  opt.seed = p.seed;
  opt.draws = p.draws;
  opt.inject_hardening_violation = p.inject_hardening_violation;
  const VerificationReport report = run_property_suite(opt);

  ScenarioResult out;
  out.record = {{"scenario", "verify"},
                {"seed", report.seed},
                {"all_passed", report.all_passed()},
                {"summary", {{"total", report.records.size()}, {"passed", report.passed()}, {"failed", report.failed()}}},
                {"failed_properties", report.failed_properties()}};
  out.files.push_back({"report.json", to_json(report).dump(2) + "\n"});
  out.exit_code = report.all_passed() ? exit_ok : exit_negative;
  return out;
}

/// Dispatches on the scenario. Library errors become structured records.
inline ScenarioResult run_scenario(const RunConfig& cfg) {
  try {
    switch (cfg.scenario) {
      case Scenario::derive_coeffs: return run_derive_coeffs(cfg);
      case Scenario::fiber_sweep: return run_fiber_sweep(cfg);
      case Scenario::allocate: return run_allocate(cfg);
      case Scenario::simulate: return run_simulate(cfg);
      case Scenario::verify: return run_verify(cfg);
    }
  } catch (const Error& e) {
    ScenarioResult out;
    out.exit_code = exit_code_for(e.code());
    out.record = {{"scenario", std::string(to_string(cfg.scenario))},
                  {"error", std::string(to_string(e.code()))},
                  {"message", e.what()}};
    return out;
  }
  return {exit_usage, {{"error", "unknown scenario"}}, {}};
}

}  // namespace vada
