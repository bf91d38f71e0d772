#pragma once
// Randomized property suite behind `vada verify`. Every property is evaluated
// on `draws` independent parameter draws; each draw yields one record with
// its parameters, a pass flag, and the worst residual or margin observed.
// Records are produced in a fixed order from a single seeded generator, so a
// given seed always yields the same report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "vada/aero_thrust.hpp"
#include "vada/antagonistic_core.hpp"
#include "vada/impedance_dynamics.hpp"
#include "vada/vada_actuator.hpp"
#include "vada/vsa_bench.hpp"

namespace vada {

/// Uniform doubles from a 64-bit Mersenne Twister. The mapping is spelled out
/// so draws are identical across standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Thrust law whose inflow sensitivity is frozen at a reference speed, so it
/// has damping but no hardening. Used to show that the damping property
/// genuinely depends on the hardening assumption.
struct InflowDecoupledChannel {
  AffineThrustModel model;
  double reference_speed = 1.0;
  double inflow = 0.0;

  double output(double v) const {
    return model.k_thrust * v * v - model.k_inflow * reference_speed * inflow;
  }
  double output_sensitivity(double v) const { return 2.0 * model.k_thrust * v; }
  double passive_coeff(double) const { return model.k_inflow * reference_speed; }
  double passive_hardening(double) const { return 0.0; }
};

struct PropertyRecord {
  std::string property;
  int draw = 0;
  nlohmann::json parameters;
  bool pass = false;
  double worst = 0.0;
  std::string metric;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  bool inject_hardening_violation = false;
  std::vector<PropertyRecord> records;

  int passed() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(),
                                          [](const PropertyRecord& r) { return r.pass; }));
  }
  int failed() const { return static_cast<int>(records.size()) - passed(); }
  bool all_passed() const { return failed() == 0; }

  /// Distinct property ids with at least one failing draw, in first-seen order.
  std::vector<std::string> failed_properties() const {
    std::vector<std::string> out;
    for (const auto& r : records)
      if (!r.pass && std::find(out.begin(), out.end(), r.property) == out.end())
        out.push_back(r.property);
    return out;
  }
};

inline nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records)
    records.push_back({{"property", r.property},
                       {"draw", r.draw},
                       {"parameters", r.parameters},
                       {"pass", r.pass},
                       {"worst", std::isfinite(r.worst) ? nlohmann::json(r.worst) : nlohmann::json(nullptr)},
                       {"metric", r.metric}});
  return {{"seed", report.seed},
          {"inject_hardening_violation", report.inject_hardening_violation},
          {"summary", {{"total", report.records.size()}, {"passed", report.passed()}, {"failed", report.failed()}}},
          {"failed_properties", report.failed_properties()},
          {"records", records}};
}

namespace verify_detail {

inline constexpr double fd_step = 1e-5;

inline double central_difference(const std::function<double(double)>& f, double x) {
  return (f(x + fd_step) - f(x - fd_step)) / (2.0 * fd_step);
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

inline AffineThrustModel draw_model(Sampler& s) {
  return {s.uniform(0.5, 2.0), s.uniform(0.2, 1.5)};
}

inline RotorGeometry draw_geometry(Sampler& s) {
  return {s.integer(2, 6),          s.uniform(0.05, 0.5), s.uniform(0.01, 0.08),
          s.uniform(0.05, 0.4),     s.uniform(4.0, 6.5),  s.uniform(1.0, 1.3)};
}

inline nlohmann::json model_json(const AffineThrustModel& m) {
  return {{"k_thrust", m.k_thrust}, {"k_inflow", m.k_inflow}};
}

inline TendonLaw draw_tendon(Sampler& s, int family) {
  switch (family) {
    case 0: return TendonLaw{QuadraticTendon{s.uniform(0.5, 2.0)}};
    case 1: return TendonLaw{ExponentialTendon{s.uniform(0.5, 2.0), s.uniform(0.5, 1.5)}};
    default: return TendonLaw{CubicTendon{s.uniform(0.5, 2.0)}};
  }
}

struct SweepOutcome {
  bool pass = true;
  double worst = 0.0;  // smallest adjacent increment, or the residual overshoot
  std::string note;
};

// Traces a co-contraction path and requires strictly increasing passive
// coefficient (and optionally promptness plus a monotone relation) with every
// residual inside the fiber tolerance.
template <class Plus, class Minus>
SweepOutcome check_cocontraction(const AntagonisticActuator<Plus, Minus>& act, CommandPair start,
                                 double u1_end, int steps, bool check_promptness) {
  SweepOutcome out;
  FiberPath path;
  try {
    path = trace_fiber(act, start, u1_end, steps);
  } catch (const Error& e) {
    return {false, std::nan(""), e.what()};
  }
  const double tol = fiber_tolerance * std::max(1.0, std::abs(path.level));
  for (double r : path.residuals)
    if (!(r <= tol)) {
      out.pass = false;
      out.note = "fiber residual above tolerance";
    }
  const auto passive = monotonicity_sweep(act, path, SweepQuantity::passive);
  out.worst = passive.min_increment.value_or(0.0);
  if (!passive.strictly_increasing) {
    out.pass = false;
    out.note = "passive coefficient not strictly increasing";
  }
  if (check_promptness) {
    const auto prompt = monotonicity_sweep(act, path, SweepQuantity::promptness);
    out.worst = std::min(out.worst, prompt.min_increment.value_or(0.0));
    if (!prompt.strictly_increasing) {
      out.pass = false;
      out.note = "promptness not strictly increasing";
    }
    if (!passive_promptness_relation(act, path).monotone) {
      out.pass = false;
      out.note = "passive/promptness relation not monotone";
    }
  }
  return out;
}

// Random rotor pair (asymmetric half of the time), random speed box lower
// bound and a trim inside the monotone regime on that box.
struct VadaDraw {
  DualRotor rotor;
  double nu_bar = 0.0;
  CommandPair start;
  double u1_end = 0.0;
};

inline VadaDraw draw_vada(Sampler& s, bool zero_trim) {
  VadaDraw d;
  const AffineThrustModel fwd = draw_model(s);
  const AffineThrustModel bwd = s.coin() ? draw_model(s) : fwd;
  const double lower = s.uniform(0.5, 1.0);
  d.rotor = {fwd, bwd, {{lower, 1e4}, {lower, 1e4}}};
  const double bound = std::min(monotone_regime_bound(fwd, lower), monotone_regime_bound(bwd, lower));
  d.nu_bar = zero_trim ? 0.0 : s.uniform(-0.9, 0.9) * bound;
  d.start = {s.uniform(1.5, 3.0), s.uniform(1.5, 3.0)};
  d.u1_end = d.start.u1 + s.uniform(1.0, 4.0);
  return d;
}

inline nlohmann::json vada_json(const VadaDraw& d) {
  return {{"rotor_fwd", model_json(d.rotor.rotor_fwd)},
          {"rotor_bwd", model_json(d.rotor.rotor_bwd)},
          {"speed_lower", d.rotor.speed_box.first.lower},
          {"nu_bar", d.nu_bar},
          {"start", {d.start.u1, d.start.u2}},
          {"u1_end", d.u1_end}};
}

}  // namespace verify_detail

struct VerifyOptions {
  std::uint64_t seed = 0;
  int draws = 10;
  int grid_points = 100;   // evaluation points per draw for pointwise properties
  int fiber_points = 100;  // points per traced fiber
  bool inject_hardening_violation = false;
};

inline VerificationReport run_property_suite(const VerifyOptions& opt) {
  using namespace verify_detail;
  Sampler s(opt.seed);
  VerificationReport report;
  report.seed = opt.seed;
  report.inject_hardening_violation = opt.inject_hardening_violation;
  auto add = [&](std::string id, int draw, nlohmann::json params, bool pass, double worst,
                 std::string metric) {
    report.records.push_back({std::move(id), draw, std::move(params), pass, worst, std::move(metric)});
  };
  const int steps = opt.fiber_points - 1;

  // Quadrature oracle against the closed form.
  for (int k = 0; k < opt.draws; ++k) {
    const RotorGeometry g = draw_geometry(s);
    const int panels = s.integer(2, 64);
    const AffineThrustModel m = derive_coefficients(g);
    double worst = 0.0;
    for (int i = 0; i < opt.grid_points; ++i) {
      const double v = s.uniform(1.0, 1000.0);
      const double nu = s.uniform(-20.0, 20.0);
      worst = std::max(worst, relative_error(bet_numeric_thrust(g, v, nu, panels), thrust(m, v, nu)));
    }
    add("bet_closed_form", k, {{"panels", panels}, {"radius", g.radius}, {"pitch_angle", g.pitch_angle}},
        worst <= 1e-12, worst, "max relative error");
  }

  // Positivity of inflow sensitivity and of its speed derivative.
  for (int k = 0; k < opt.draws; ++k) {
    const AffineThrustModel m = draw_model(s);
    double min_lambda = INFINITY, min_hardening = INFINITY;
    for (int i = 0; i < opt.grid_points; ++i) {
      const double v = s.uniform(1e-3, 100.0);
      const double nu = s.uniform(-50.0, 50.0);
      min_lambda = std::min(min_lambda, inflow_sensitivity(m, v, nu));
      min_hardening = std::min(min_hardening, hardening_rate(m, v, nu));
    }
    add("inflow_sensitivity_positive", k, model_json(m), min_lambda > 0.0, min_lambda, "min lambda");
    add("hardening_positive", k, model_json(m), min_hardening > 0.0, min_hardening, "min dlambda/dv");
  }

  // Analytic derivatives against central differences of thrust.
  for (int k = 0; k < opt.draws; ++k) {
    const AffineThrustModel m = draw_model(s);
    double worst = 0.0;
    for (int i = 0; i < opt.grid_points; ++i) {
      const double v = s.uniform(0.5, 10.0);
      const double nu = s.uniform(-5.0, 5.0);
      const double fd_lambda = -central_difference([&](double x) { return thrust(m, v, x); }, nu);
      const double fd_speed = central_difference([&](double x) { return thrust(m, x, nu); }, v);
      const double fd_hard =
          central_difference([&](double x) { return inflow_sensitivity(m, x, nu); }, v);
      worst = std::max({worst, relative_error(inflow_sensitivity(m, v, nu), fd_lambda),
                        relative_error(speed_sensitivity(m, v, nu), fd_speed),
                        relative_error(hardening_rate(m, v, nu), fd_hard)});
    }
    add("thrust_derivatives_fd", k, model_json(m), worst <= 1e-6, worst, "max relative error");
  }

  // Co-contraction raises stiffness and promptness for every tendon family.
  const char* families[] = {"quadratic", "exponential", "cubic"};
  for (int family = 0; family < 3; ++family) {
    for (int k = 0; k < opt.draws; ++k) {
      const VsaConfig cfg{draw_tendon(s, family), s.uniform(0.5, 2.0), {1.0, 1.0}};
      const CommandPair start{s.uniform(0.2, 1.5), s.uniform(0.2, 1.5)};
      const double u1_end = start.u1 + s.uniform(0.5, 2.0);
      const auto out = check_cocontraction(as_antagonistic(cfg), start, u1_end, steps, true);
      add(std::string("vsa_cocontraction_") + families[family], k,
          {{"pulley_radius", cfg.pulley_radius}, {"start", {start.u1, start.u2}}, {"u1_end", u1_end}},
          out.pass, out.worst, "min adjacent increment");
    }
  }

  // Co-contraction raises aerodynamic damping at zero trim and at nonzero trims.
  for (int pass = 0; pass < 2; ++pass) {
    const bool zero_trim = pass == 0;
    for (int k = 0; k < opt.draws; ++k) {
      const VadaDraw d = draw_vada(s, zero_trim);
      SweepOutcome out;
      if (opt.inject_hardening_violation) {
        const double ref = d.start.u1;
        const InflowDecoupledChannel fwd{d.rotor.rotor_fwd, ref, d.nu_bar};
        const InflowDecoupledChannel bwd{d.rotor.rotor_bwd, ref, -d.nu_bar};
        out = check_cocontraction(AntagonisticActuator(fwd, bwd, d.rotor.speed_box), d.start, d.u1_end,
                                  steps, false);
      } else {
        out = check_cocontraction(as_antagonistic_at_trim(d.rotor, d.nu_bar), d.start, d.u1_end, steps,
                                  false);
      }
      add(zero_trim ? "vada_damping_cocontraction" : "vada_trim_damping_cocontraction", k, vada_json(d),
          out.pass, out.worst, "min adjacent increment");
    }
  }

  // Incremental damping against -dF/dnu by central differences.
  for (int k = 0; k < opt.draws; ++k) {
    const DualRotor dr{draw_model(s), draw_model(s), {}};
    double worst = 0.0;
    for (int i = 0; i < opt.grid_points; ++i) {
      const CommandPair v{s.uniform(0.5, 10.0), s.uniform(0.5, 10.0)};
      const double nu = s.uniform(-5.0, 5.0);
      const double fd = -central_difference([&](double x) { return net_force(dr, v, x); }, nu);
      worst = std::max(worst, relative_error(damping_at_trim(dr, v, nu), fd));
    }
    add("damping_fd", k, {{"rotor_fwd", model_json(dr.rotor_fwd)}, {"rotor_bwd", model_json(dr.rotor_bwd)}},
        worst <= 1e-6, worst, "max relative error");
  }

  // Allocation round trip on feasible requests.
  for (int k = 0; k < opt.draws; ++k) {
    const AffineThrustModel fwd = draw_model(s);
    const DualRotor dr{fwd, s.coin() ? draw_model(s) : fwd, {}};
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < opt.grid_points; ++i) {
      const CommandPair target{s.uniform(1.0, 10.0), s.uniform(1.0, 10.0)};
      const double nu = s.uniform(-2.0, 2.0);
      const TrimPoint trim{nu, detail::net_force_raw(dr, target, nu)};
      const double sigma = detail::damping_raw(dr, target);
      try {
        const auto res = allocate(dr, trim, sigma);
        ok = ok && res.feasible;
        worst = std::max({worst, relative_error(net_force(dr, res.speeds, nu), trim.force_level),
                          relative_error(damping_at_trim(dr, res.speeds, nu), sigma)});
      } catch (const Error&) {
        ok = false;
      }
    }
    add("allocation_round_trip", k, {{"rotor_fwd", model_json(dr.rotor_fwd)}, {"rotor_bwd", model_json(dr.rotor_bwd)}},
        ok && worst <= 1e-9, worst, "max relative residual");
  }

  // RK4 trajectory against the closed-form response.
  for (int k = 0; k < opt.draws; ++k) {
    const AffineThrustModel m = draw_model(s);
    const BodyConfig body{s.uniform(0.5, 2.0), {m, m, {}}};
    const CommandPair v{s.uniform(1.0, 3.0), s.uniform(1.0, 3.0)};
    const double nu0 = s.uniform(-2.0, 2.0);
    const double f_ext = s.uniform(-2.0, 2.0);
    const double tau = body.mass / apparent_damping(body, v);
    const auto traj = simulate(body, constant_schedule(v, f_ext), nu0, 5.0 * tau, 1e-3);
    double worst = 0.0;
    for (const auto& smp : traj.samples)
      worst = std::max(worst, std::abs(smp.nu - analytic_response(body, v, nu0, f_ext, smp.t)));
    add("simulate_vs_analytic", k,
        {{"mass", body.mass}, {"model", model_json(m)}, {"speeds", {v.u1, v.u2}}, {"nu0", nu0}, {"f_ext", f_ext}},
        worst <= 1e-8, worst, "max abs error");
  }

  // Tendon joint with r = k_D x^2 / 2 and R = 1 has the rotor pair's damping.
  for (int k = 0; k < opt.draws; ++k) {
    const AffineThrustModel m = draw_model(s);
    const DualRotor dr{m, m, {}};
    const auto vsa = as_antagonistic(VsaConfig{TendonLaw{QuadraticTendon{m.k_inflow}}, 1.0, {1.0, 1.0}});
    const auto vada = as_antagonistic_at_trim(dr, 0.0);
    double worst = 0.0;
    for (int i = 0; i < opt.grid_points; ++i) {
      const CommandPair u{s.uniform(0.1, 10.0), s.uniform(0.1, 10.0)};
      worst = std::max(worst, std::abs(passive_coefficient(vsa, u) - passive_coefficient(vada, u)));
    }
    add("isomorphism_passive", k, model_json(m), worst <= 1e-12, worst, "max abs difference");
  }

  return report;
}

}  // namespace vada
