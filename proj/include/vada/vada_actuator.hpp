#pragma once
// Dual-rotor variable aerodynamic damping actuator. Rotor 1 pushes along +nu
// and sees inflow +nu, rotor 2 pushes along -nu and sees inflow -nu.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "vada/aero_thrust.hpp"
#include "vada/antagonistic_core.hpp"
#include "vada/error.hpp"

namespace vada {

struct DualRotor {
  AffineThrustModel rotor_fwd;
  AffineThrustModel rotor_bwd;
  AdmissibleBox speed_box;  // open intervals, rad/s

  bool identical_rotors() const noexcept { return rotor_fwd == rotor_bwd; }

  friend bool operator==(const DualRotor&, const DualRotor&) = default;
};

inline void validate(const DualRotor& dr) {
  validate(dr.rotor_fwd);
  validate(dr.rotor_bwd);
  for (const Interval* iv : {&dr.speed_box.first, &dr.speed_box.second})
    if (!(iv->lower >= 0.0) || !(iv->upper > iv->lower))
      throw Error(Errc::invalid_model, "speed box needs 0 <= lower < upper");
}

struct TrimPoint {
  double nu_bar = 0.0;       // m/s
  double force_level = 0.0;  // N

  friend bool operator==(const TrimPoint&, const TrimPoint&) = default;
};

namespace detail {

inline void require_speeds_in_box(const DualRotor& dr, const CommandPair& v) {
  if (!dr.speed_box.contains(v))
    throw Error(Errc::out_of_box, "rotor speeds (" + std::to_string(v.u1) + ", " +
                                      std::to_string(v.u2) + ") outside the speed box");
}

// Polynomial evaluation without the speed-sign precondition; the allocation
// solver probes candidates that may have a negative speed.
inline double net_force_raw(const DualRotor& dr, const CommandPair& v, double nu) {
  const auto& a = dr.rotor_fwd;
  const auto& b = dr.rotor_bwd;
  return a.k_thrust * v.u1 * v.u1 - a.k_inflow * v.u1 * nu -
         (b.k_thrust * v.u2 * v.u2 + b.k_inflow * v.u2 * nu);
}

inline double damping_raw(const DualRotor& dr, const CommandPair& v) {
  return dr.rotor_fwd.k_inflow * v.u1 + dr.rotor_bwd.k_inflow * v.u2;
}

}  // namespace detail

inline double net_force(const DualRotor& dr, const CommandPair& v, double nu) {
  detail::require_speeds_in_box(dr, v);
  return thrust(dr.rotor_fwd, v.u1, nu) - thrust(dr.rotor_bwd, v.u2, -nu);
}

/// Incremental damping -dF/dnu at the trim airspeed nu_bar.
inline double damping_at_trim(const DualRotor& dr, const CommandPair& v, double nu_bar) {
  detail::require_speeds_in_box(dr, v);
  return inflow_sensitivity(dr.rotor_fwd, v.u1, nu_bar) +
         inflow_sensitivity(dr.rotor_bwd, v.u2, -nu_bar);
}

inline double force_promptness(const DualRotor& dr, const CommandPair& v, double nu_bar) {
  detail::require_speeds_in_box(dr, v);
  return std::hypot(speed_sensitivity(dr.rotor_fwd, v.u1, nu_bar),
                    speed_sensitivity(dr.rotor_bwd, v.u2, -nu_bar));
}

/// One rotor at a frozen inflow, viewed as an antagonistic channel.
struct ThrustChannel {
  AffineThrustModel model;
  double inflow = 0.0;

  double output(double v) const { return thrust(model, v, inflow); }
  double output_sensitivity(double v) const { return speed_sensitivity(model, v, inflow); }
  double passive_coeff(double v) const { return inflow_sensitivity(model, v, inflow); }
  double passive_hardening(double v) const { return hardening_rate(model, v, inflow); }
};

using VadaActuator = AntagonisticActuator<ThrustChannel>;

/// Trim task map v -> F(v, nu_bar). Requires dT/dv > 0 on the whole speed box
/// for both rotors at their trim inflows.
inline VadaActuator as_antagonistic_at_trim(const DualRotor& dr, double nu_bar) {
  validate(dr);
  const ThrustChannel fwd{dr.rotor_fwd, nu_bar};
  const ThrustChannel bwd{dr.rotor_bwd, -nu_bar};
  // dT/dv grows with v, so the open lower bound is the worst case.
  if (speed_sensitivity(fwd.model, dr.speed_box.first.lower, fwd.inflow) < 0.0 ||
      speed_sensitivity(bwd.model, dr.speed_box.second.lower, bwd.inflow) < 0.0)
    throw Error(Errc::regime_violation,
                "trim airspeed " + std::to_string(nu_bar) +
                    " leaves the monotone-thrust regime at the speed box lower bound");
  return VadaActuator(fwd, bwd, dr.speed_box);
}

enum class AllocationMethod { closed_form, newton };

struct AllocationResult {
  CommandPair speeds;  // the solution, or the unconstrained candidate if infeasible
  double achieved_force = 0.0;
  double achieved_damping = 0.0;
  bool feasible = false;
  AllocationMethod method = AllocationMethod::closed_form;
  int iterations = 0;
  std::string reason;  // empty when feasible
};

inline constexpr double allocation_tolerance = 1e-9;
inline constexpr int allocation_max_iterations = 50;

namespace detail {

inline void finish_allocation(const DualRotor& dr, double nu_bar, AllocationResult& result) {
  result.achieved_force = net_force_raw(dr, result.speeds, nu_bar);
  result.achieved_damping = damping_raw(dr, result.speeds);
  const bool positive = result.speeds.u1 > 0.0 && result.speeds.u2 > 0.0;
  if (!positive) {
    result.feasible = false;
    result.reason = "candidate requires a nonpositive rotor speed (|d| >= s)";
  } else if (!dr.speed_box.contains(result.speeds)) {
    result.feasible = false;
    result.reason = "candidate lies outside the speed box";
  } else {
    result.feasible = true;
  }
}

}  // namespace detail

/// Identical-rotor inversion: s = v1 + v2 fixes the damping, d = v1 - v2 then
/// fixes the force at the trim.
inline AllocationResult allocate_closed_form(const AffineThrustModel& model, const TrimPoint& trim,
                                             double sigma_des) {
  const double s = sigma_des / model.k_inflow;
  const double d = (trim.force_level / s + model.k_inflow * trim.nu_bar) / model.k_thrust;
  AllocationResult result;
  result.speeds = {0.5 * (s + d), 0.5 * (s - d)};
  result.method = AllocationMethod::closed_form;
  return result;
}

/// Newton iteration on (F(v, nu_bar) - F_bar, sigma_a(v) - sigma_des) from
/// an arbitrary seed. Throws newton-divergence when both residuals are not
/// within tolerance after allocation_max_iterations steps.
inline AllocationResult allocate_newton(const DualRotor& dr, const TrimPoint& trim,
                                        double sigma_des, const CommandPair& seed) {
  validate(dr);
  if (!(sigma_des > 0.0)) throw Error(Errc::invalid_request, "sigma_des must be positive");
  const auto& a = dr.rotor_fwd;
  const auto& b = dr.rotor_bwd;
  const double nu = trim.nu_bar;
  const double force_tol = allocation_tolerance * std::max(1.0, std::abs(trim.force_level));
  const double damping_tol = allocation_tolerance * std::max(1.0, sigma_des);

  auto residual = [&](const CommandPair& x) {
    return std::pair{detail::net_force_raw(dr, x, nu) - trim.force_level, detail::damping_raw(dr, x) - sigma_des};
  };
  // J = [[dF/dv1, dF/dv2], [kD1, kD2]]
  auto newton_step = [&](const CommandPair& x, double r_force, double r_damping) -> std::optional<CommandPair> {
    const double j11 = 2.0 * a.k_thrust * x.u1 - a.k_inflow * nu;
    const double j12 = -(2.0 * b.k_thrust * x.u2 + b.k_inflow * nu);
    const double j21 = a.k_inflow;
    const double j22 = b.k_inflow;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    return CommandPair{x.u1 - (j22 * r_force - j12 * r_damping) / det,
                       x.u2 - (-j21 * r_force + j11 * r_damping) / det};
  };
  auto scaled = [&](const std::pair<double, double>& r) {
    return std::max(std::abs(r.first) / force_tol, std::abs(r.second) / damping_tol);
  };

  CommandPair v = seed;
  for (int it = 0; it <= allocation_max_iterations; ++it) {
    const auto r = residual(v);
    if (scaled(r) <= 1.0) {
      // Polish once; keep the step only if it lowers the residual.
      if (const auto polished = newton_step(v, r.first, r.second); polished && scaled(residual(*polished)) < scaled(r))
        v = *polished;
      AllocationResult result;
      result.speeds = v;
      result.method = AllocationMethod::newton;
      result.iterations = it;
      detail::finish_allocation(dr, nu, result);
      return result;
    }
    if (it == allocation_max_iterations || !std::isfinite(r.first)) break;
    const auto next = newton_step(v, r.first, r.second);
    if (!next) break;
    v = *next;
  }
  throw Error(Errc::newton_divergence, "allocation Newton did not converge within " +
                                           std::to_string(allocation_max_iterations) +
                                           " iterations");
}

/// Speeds realizing force F_bar and incremental damping sigma_des, both at
/// the trim airspeed. Infeasible requests come back with feasible == false
/// and the unconstrained candidate instead of a clamped answer.
inline AllocationResult allocate(const DualRotor& dr, const TrimPoint& trim, double sigma_des) {
  validate(dr);
  if (!(sigma_des > 0.0)) throw Error(Errc::invalid_request, "sigma_des must be positive");

  if (dr.identical_rotors()) {
    AllocationResult result = allocate_closed_form(dr.rotor_fwd, trim, sigma_des);
    detail::finish_allocation(dr, trim.nu_bar, result);
    return result;
  }

  const AffineThrustModel mean{0.5 * (dr.rotor_fwd.k_thrust + dr.rotor_bwd.k_thrust),
                               0.5 * (dr.rotor_fwd.k_inflow + dr.rotor_bwd.k_inflow)};
  const CommandPair seed = allocate_closed_form(mean, trim, sigma_des).speeds;
  return allocate_newton(dr, trim, sigma_des, seed);
}

/// Air-relative trim airspeed under steady wind.
constexpr double wind_trim(double body_speed, double wind_speed) noexcept {
  return body_speed - wind_speed;
}

}  // namespace vada
