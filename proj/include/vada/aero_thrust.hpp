#pragma once
// Single-rotor thrust physics: first-order blade element derivation of the
// affine-inflow thrust model T(v, nu_in) = k_T v^2 - k_D v nu_in.

#include <cmath>
#include <numbers>
#include <string>

#include "vada/error.hpp"

namespace vada {

/// Physical propeller description. Constant chord and pitch along the blade.
struct RotorGeometry {
  int blade_count = 0;
  double radius = 0.0;       // m
  double chord = 0.0;        // m
  double pitch_angle = 0.0;  // rad
  double lift_slope = 0.0;   // 1/rad
  double air_density = 0.0;  // kg/m^3

  friend bool operator==(const RotorGeometry&, const RotorGeometry&) = default;
};

/// k_thrust in N s^2/rad^2, k_inflow in N s^2/(rad m).
struct AffineThrustModel {
  double k_thrust = 0.0;
  double k_inflow = 0.0;

  friend bool operator==(const AffineThrustModel&, const AffineThrustModel&) = default;
};

namespace detail {

inline void require_positive(double value, const char* name, Errc code) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(code, std::string(name) + " must be a positive finite number");
}

inline void require_nonnegative_speed(double v) {
  if (!(v >= 0.0)) throw Error(Errc::negative_speed, "rotor speed must be >= 0");
}

}  // namespace detail

/// Checks every field except the pitch angle, which may be zero for the raw
/// closed form (see closed_form_coefficients).
inline void validate_geometry_allowing_zero_pitch(const RotorGeometry& geom) {
  if (geom.blade_count <= 0) throw Error(Errc::invalid_geometry, "blade_count must be positive");
  detail::require_positive(geom.radius, "radius", Errc::invalid_geometry);
  detail::require_positive(geom.chord, "chord", Errc::invalid_geometry);
  detail::require_positive(geom.lift_slope, "lift_slope", Errc::invalid_geometry);
  detail::require_positive(geom.air_density, "air_density", Errc::invalid_geometry);
  if (!(geom.pitch_angle >= 0.0) || !(geom.pitch_angle < std::numbers::pi / 2))
    throw Error(Errc::invalid_geometry, "pitch_angle must lie in [0, pi/2)");
}

inline void validate(const RotorGeometry& geom) {
  validate_geometry_allowing_zero_pitch(geom);
  if (!(geom.pitch_angle > 0.0)) throw Error(Errc::invalid_geometry, "pitch_angle must be positive");
}

inline void validate(const AffineThrustModel& model) {
  detail::require_positive(model.k_thrust, "k_thrust", Errc::invalid_model);
  detail::require_positive(model.k_inflow, "k_inflow", Errc::invalid_model);
}

/// Raw closed-form constants. Unlike derive_coefficients this accepts a zero
/// pitch angle and then returns k_thrust == 0, which is not a valid model.
inline AffineThrustModel closed_form_coefficients(const RotorGeometry& geom) {
  validate_geometry_allowing_zero_pitch(geom);
  const double base = geom.blade_count * geom.air_density * geom.chord * geom.lift_slope;
  const double r2 = geom.radius * geom.radius;
  return {base * geom.pitch_angle * r2 * geom.radius / 6.0, base * r2 / 4.0};
}

inline AffineThrustModel derive_coefficients(const RotorGeometry& geom) {
  validate(geom);
  return closed_form_coefficients(geom);
}

/// Net thrust; defined for every real inflow and may go negative outside the
/// monotone regime.
inline double thrust(const AffineThrustModel& model, double v, double nu_in) {
  detail::require_nonnegative_speed(v);
  return model.k_thrust * v * v - model.k_inflow * v * nu_in;
}

/// Composite Simpson quadrature of the elemental blade thrust over [0, radius].
/// The integrand is quadratic in the radial station so every panel is exact.
inline double bet_numeric_thrust(const RotorGeometry& geom, double v, double nu_in, int panels) {
  validate_geometry_allowing_zero_pitch(geom);
  if (!(v > 0.0)) throw Error(Errc::negative_speed, "bet_numeric_thrust requires v > 0");
  if (panels < 2) throw Error(Errc::too_few_panels, "at least 2 panels required");

  const double scale =
      0.5 * geom.blade_count * geom.air_density * geom.chord * geom.lift_slope;
  auto element = [&](double b) { return scale * (geom.pitch_angle * v * v * b * b - v * b * nu_in); };

  const double width = geom.radius / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = width * i;
    const double b = (i + 1 == panels) ? geom.radius : width * (i + 1);
    sum += (b - a) / 6.0 * (element(a) + 4.0 * element(0.5 * (a + b)) + element(b));
  }
  return sum;
}

/// lambda = -dT/dnu_in = k_D v.
inline double inflow_sensitivity(const AffineThrustModel& model, double v, double /*nu_in*/) {
  detail::require_nonnegative_speed(v);
  return model.k_inflow * v;
}

/// d lambda / dv; constant for the affine model.
inline double hardening_rate(const AffineThrustModel& model, double /*v*/, double /*nu_in*/) {
  return model.k_inflow;
}

/// dT/dv = 2 k_T v - k_D nu_in.
inline double speed_sensitivity(const AffineThrustModel& model, double v, double nu_in) {
  return 2.0 * model.k_thrust * v - model.k_inflow * nu_in;
}

/// Supremum of inflows at which thrust still grows with rotor speed.
inline double monotone_regime_bound(const AffineThrustModel& model, double v) {
  return 2.0 * (model.k_thrust / model.k_inflow) * v;
}

}  // namespace vada
