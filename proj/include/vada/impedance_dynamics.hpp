#pragma once
// Translational dynamics of the dual-rotor body in still air:
//   m dnu/dt = F(v, nu) + F_ext
// which for affine-inflow rotors takes the impedance form
//   m dnu/dt + c_app(v) (nu - nu_eq(v)) = F_ext.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vada/antagonistic_core.hpp"
#include "vada/error.hpp"
#include "vada/vada_actuator.hpp"

namespace vada {

struct BodyConfig {
  double mass = 1.0;  // kg
  DualRotor dual_rotor;

  friend bool operator==(const BodyConfig&, const BodyConfig&) = default;
};

inline void validate(const BodyConfig& body) {
  if (!(body.mass > 0.0) || !std::isfinite(body.mass))
    throw Error(Errc::invalid_model, "mass must be positive");
  validate(body.dual_rotor);
}

/// c_app(v): the viscous coefficient multiplying nu. Equals the incremental
/// damping at any trim for affine rotors.
inline double apparent_damping(const BodyConfig& body, const CommandPair& v) {
  return damping_at_trim(body.dual_rotor, v, 0.0);
}

/// F_act(v) = F(v, 0).
inline double active_force(const BodyConfig& body, const CommandPair& v) {
  return net_force(body.dual_rotor, v, 0.0);
}

/// Air-relative velocity at which the net force vanishes. For identical
/// rotors this is (k_T / k_D)(v1 - v2); otherwise F_act / c_app.
inline double equilibrium_velocity(const BodyConfig& body, const CommandPair& v) {
  const DualRotor& dr = body.dual_rotor;
  if (dr.identical_rotors()) {
    detail::require_speeds_in_box(dr, v);
    return dr.rotor_fwd.k_thrust / dr.rotor_fwd.k_inflow * (v.u1 - v.u2);
  }
  return active_force(body, v) / apparent_damping(body, v);
}

struct ModeDecomposition {
  double common = 0.0;        // v1 + v2
  double differential = 0.0;  // v1 - v2

  friend bool operator==(const ModeDecomposition&, const ModeDecomposition&) = default;
};

constexpr ModeDecomposition mode_decomposition(const CommandPair& v) noexcept {
  return {v.u1 + v.u2, v.u1 - v.u2};
}

constexpr CommandPair from_modes(const ModeDecomposition& m) noexcept {
  return {0.5 * (m.common + m.differential), 0.5 * (m.common - m.differential)};
}

/// Closed-form response to constant inputs.
inline double analytic_response(const BodyConfig& body, const CommandPair& v, double nu0,
                                double external_force, double t) {
  validate(body);
  const double c = apparent_damping(body, v);
  const double nu_inf = equilibrium_velocity(body, v) + external_force / c;
  return nu_inf + (nu0 - nu_inf) * std::exp(-c * t / body.mass);
}

/// Inputs held from t_start until the next segment begins.
struct ScheduleSegment {
  double t_start = 0.0;
  CommandPair speeds;
  double external_force = 0.0;

  friend bool operator==(const ScheduleSegment&, const ScheduleSegment&) = default;
};

/// Piecewise-constant rotor speeds and external force. Segment start times
/// are the breakpoints; the first one must cover t = 0.
struct InputSchedule {
  std::vector<ScheduleSegment> segments;

  friend bool operator==(const InputSchedule&, const InputSchedule&) = default;
};

inline InputSchedule constant_schedule(const CommandPair& speeds, double external_force = 0.0) {
  return {{ScheduleSegment{0.0, speeds, external_force}}};
}

inline void validate(const InputSchedule& schedule, const DualRotor& dr) {
  if (schedule.segments.empty()) throw Error(Errc::schedule_gap, "schedule has no segments");
  if (schedule.segments.front().t_start > 0.0)
    throw Error(Errc::schedule_gap, "schedule starts at t = " +
                                        std::to_string(schedule.segments.front().t_start) +
                                        " and leaves [0, t_start) uncovered");
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const auto& seg = schedule.segments[i];
    if (!std::isfinite(seg.t_start) || !std::isfinite(seg.external_force))
      throw Error(Errc::invalid_request, "schedule segment " + std::to_string(i) + " is not finite");
    if (i > 0 && !(seg.t_start > schedule.segments[i - 1].t_start))
      throw Error(Errc::invalid_request, "schedule breakpoints must be strictly increasing");
    detail::require_speeds_in_box(dr, seg.speeds);
  }
}

/// Active segment at time t (right-continuous at breakpoints).
inline const ScheduleSegment& segment_at(const InputSchedule& schedule, double t) {
  auto it = std::upper_bound(schedule.segments.begin(), schedule.segments.end(), t,
                             [](double time, const ScheduleSegment& s) { return time < s.t_start; });
  if (it == schedule.segments.begin())
    throw Error(Errc::schedule_gap, "no schedule segment covers t = " + std::to_string(t));
  return *(it - 1);
}

struct TrajectorySample {
  double t = 0.0;
  double nu = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double force = 0.0;  // net aerodynamic force recomputed at (v(t), nu(t))
  double external_force = 0.0;

  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  std::string integrator = "rk4";
};

namespace detail {

inline double rk4_step(const BodyConfig& body, const ScheduleSegment& seg, double nu, double h) {
  auto rate = [&](double x) {
    return (net_force(body.dual_rotor, seg.speeds, x) + seg.external_force) / body.mass;
  };
  const double k1 = rate(nu);
  const double k2 = rate(nu + 0.5 * h * k1);
  const double k3 = rate(nu + 0.5 * h * k2);
  const double k4 = rate(nu + h * k3);
  return nu + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Classical RK4 with fixed step dt. Samples sit on the grid k * dt (plus
/// t_end when it is not a grid point). A step that contains a breakpoint is
/// split there, so no RK4 stage ever straddles an input discontinuity.
inline Trajectory simulate(const BodyConfig& body, const InputSchedule& schedule, double nu0,
                           double t_end, double dt) {
  validate(body);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::invalid_step, "dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw Error(Errc::invalid_step, "t_end must be positive");
  if (!std::isfinite(nu0)) throw Error(Errc::invalid_request, "nu0 must be finite");
  validate(schedule, body.dual_rotor);

  std::vector<double> times;
  const double ratio = t_end / dt;
  const auto whole = static_cast<long long>(std::floor(ratio + 1e-9));
  for (long long k = 0; k <= whole; ++k) times.push_back(std::min(static_cast<double>(k) * dt, t_end));
  if (std::abs(ratio - static_cast<double>(whole)) <= 1e-9) times.back() = t_end;
  else times.push_back(t_end);

  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(times.size());

  auto record = [&](double t, double nu) {
    const auto& seg = segment_at(schedule, t);
    traj.samples.push_back({t, nu, seg.speeds.u1, seg.speeds.u2,
                            net_force(body.dual_rotor, seg.speeds, nu), seg.external_force});
  };

  double nu = nu0;
  record(times.front(), nu);
  for (std::size_t k = 1; k < times.size(); ++k) {
    double a = times[k - 1];
    const double b = times[k];
    try {
      for (const auto& seg : schedule.segments) {
        if (seg.t_start > a && seg.t_start < b) {
          nu = detail::rk4_step(body, segment_at(schedule, a), nu, seg.t_start - a);
          a = seg.t_start;
        }
      }
      nu = detail::rk4_step(body, segment_at(schedule, a), nu, b - a);
    } catch (const Error& e) {
      throw Error(e.code(), "at t = " + std::to_string(a) + ": " + e.what());
    }
    if (!std::isfinite(nu))
      throw Error(Errc::invalid_step, "state became non-finite at t = " + std::to_string(b));
    record(b, nu);
  }
  return traj;
}

}  // namespace vada
