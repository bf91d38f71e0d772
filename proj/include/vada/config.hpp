#pragma once
// Run configuration: one JSON document per run.
//
//   {
//     "scenario": "allocate",
//     "model": { "dual_rotor": { ... } },
//     "allocate": { "force_level": 3, "sigma_des": 4, "nu_bar": 0 }
//   }
//
// "model" holds exactly one of rotor_geometry, dual_rotor or vsa (verify
// takes none). Scenario parameters live under a key named after the
// scenario. Unknown keys are rejected so typos do not go unnoticed.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include <json.hpp>

#include "vada/aero_thrust.hpp"
#include "vada/antagonistic_core.hpp"
#include "vada/error.hpp"
#include "vada/impedance_dynamics.hpp"
#include "vada/vada_actuator.hpp"
#include "vada/vsa_bench.hpp"

namespace vada {

using json = nlohmann::json;

enum class Scenario { derive_coeffs, fiber_sweep, allocate, simulate, verify };

constexpr std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::derive_coeffs: return "derive-coeffs";
    case Scenario::fiber_sweep: return "fiber-sweep";
    case Scenario::allocate: return "allocate";
    case Scenario::simulate: return "simulate";
    case Scenario::verify: return "verify";
  }
  return "unknown";
}

inline Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::derive_coeffs, Scenario::fiber_sweep, Scenario::allocate,
                     Scenario::simulate, Scenario::verify})
    if (to_string(s) == name) return s;
  throw Error(Errc::config_parse, "unknown scenario '" + std::string(name) + "'");
}

/// A rotor given either directly by its coefficients or by its geometry.
struct RotorSpec {
  std::variant<AffineThrustModel, RotorGeometry> source;

  AffineThrustModel model() const {
    if (const auto* m = std::get_if<AffineThrustModel>(&source)) return *m;
    return derive_coefficients(std::get<RotorGeometry>(source));
  }

  friend bool operator==(const RotorSpec&, const RotorSpec&) = default;
};

struct DualRotorSpec {
  RotorSpec rotor_fwd;
  std::optional<RotorSpec> rotor_bwd;  // defaults to rotor_fwd
  AdmissibleBox speed_box;

  DualRotor build() const {
    DualRotor dr{rotor_fwd.model(), rotor_bwd ? rotor_bwd->model() : rotor_fwd.model(), speed_box};
    validate(dr);
    return dr;
  }

  friend bool operator==(const DualRotorSpec&, const DualRotorSpec&) = default;
};

using ModelSection = std::variant<std::monostate, RotorGeometry, DualRotorSpec, VsaConfig>;

struct DeriveParams {
  double sample_speed = 100.0;
  double sample_inflow = 1.0;
  int panels = 8;
  friend bool operator==(const DeriveParams&, const DeriveParams&) = default;
};

/// Either `start`, or `level` together with `u1_start`.
struct FiberSweepParams {
  std::optional<CommandPair> start;
  std::optional<double> level;
  std::optional<double> u1_start;
  double u1_end = 0.0;
  int steps = 0;
  double nu_bar = 0.0;  // dual rotor only
  friend bool operator==(const FiberSweepParams&, const FiberSweepParams&) = default;
};

struct AllocateParams {
  double force_level = 0.0;
  double sigma_des = 0.0;
  double nu_bar = 0.0;
  friend bool operator==(const AllocateParams&, const AllocateParams&) = default;
};

struct SimulateParams {
  double mass = 1.0;
  double nu0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  InputSchedule schedule;
  friend bool operator==(const SimulateParams&, const SimulateParams&) = default;
};

inline constexpr std::uint64_t default_verify_seed = 20260101;

struct VerifyParams {
  std::uint64_t seed = default_verify_seed;
  int draws = 10;
  bool inject_hardening_violation = false;
  friend bool operator==(const VerifyParams&, const VerifyParams&) = default;
};

using ScenarioParams =
    std::variant<DeriveParams, FiberSweepParams, AllocateParams, SimulateParams, VerifyParams>;

struct RunConfig {
  Scenario scenario = Scenario::verify;
  ModelSection model;
  ScenarioParams params;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace config_detail {

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(Errc::config_parse, "missing field '" + key + "' in " + where);
  return *it;
}

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw Error(Errc::config_parse, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(Errc::config_parse, "unknown field '" + key + "' in " + where);
  }
}

inline double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw Error(Errc::config_parse, "field '" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const std::string& key, const std::string& where,
                        double fallback) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

inline int integer(const json& obj, const std::string& key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer())
    throw Error(Errc::config_parse, "field '" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

inline CommandPair pair(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw Error(Errc::config_parse, what + " must be a two-element numeric array");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline json pair_to_json(const CommandPair& u) { return json::array({u.u1, u.u2}); }

// Infinite upper bounds are written as null.
inline Interval interval(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !(v[1].is_number() || v[1].is_null()))
    throw Error(Errc::config_parse, what + " must be [lower, upper|null]");
  return {v[0].get<double>(),
          v[1].is_null() ? std::numeric_limits<double>::infinity() : v[1].get<double>()};
}

inline json interval_to_json(const Interval& iv) {
  return json::array({iv.lower, std::isinf(iv.upper) ? json(nullptr) : json(iv.upper)});
}

inline RotorGeometry parse_geometry(const json& j, const std::string& where) {
  reject_unknown(j, {"blade_count", "radius", "chord", "pitch_angle", "lift_slope", "air_density"}, where);
  RotorGeometry g;
  g.blade_count = integer(j, "blade_count", where);
  g.radius = number(j, "radius", where);
  g.chord = number(j, "chord", where);
  g.pitch_angle = number(j, "pitch_angle", where);
  g.lift_slope = number(j, "lift_slope", where);
  g.air_density = number(j, "air_density", where);
  return g;
}

inline json geometry_to_json(const RotorGeometry& g) {
  return {{"blade_count", g.blade_count}, {"radius", g.radius},         {"chord", g.chord},
          {"pitch_angle", g.pitch_angle}, {"lift_slope", g.lift_slope}, {"air_density", g.air_density}};
}

inline RotorSpec parse_rotor(const json& j, const std::string& where) {
  if (j.contains("geometry")) {
    reject_unknown(j, {"geometry"}, where);
    return {parse_geometry(j["geometry"], where + ".geometry")};
  }
  reject_unknown(j, {"k_thrust", "k_inflow"}, where);
  return {AffineThrustModel{number(j, "k_thrust", where), number(j, "k_inflow", where)}};
}

inline json rotor_to_json(const RotorSpec& r) {
  if (const auto* m = std::get_if<AffineThrustModel>(&r.source))
    return {{"k_thrust", m->k_thrust}, {"k_inflow", m->k_inflow}};
  return {{"geometry", geometry_to_json(std::get<RotorGeometry>(r.source))}};
}

inline DualRotorSpec parse_dual_rotor(const json& j) {
  const std::string where = "model.dual_rotor";
  reject_unknown(j, {"rotor_fwd", "rotor_bwd", "speed_box"}, where);
  DualRotorSpec spec{parse_rotor(field(j, "rotor_fwd", where), where + ".rotor_fwd"), std::nullopt, {}};
  if (j.contains("rotor_bwd")) spec.rotor_bwd = parse_rotor(j["rotor_bwd"], where + ".rotor_bwd");
  if (j.contains("speed_box")) {
    const json& box = j["speed_box"];
    if (!box.is_array() || box.size() != 2)
      throw Error(Errc::config_parse, "speed_box must hold one interval per rotor");
    spec.speed_box = {interval(box[0], "speed_box[0]"), interval(box[1], "speed_box[1]")};
  }
  return spec;
}

inline json dual_rotor_to_json(const DualRotorSpec& spec) {
  json j = {{"rotor_fwd", rotor_to_json(spec.rotor_fwd)},
            {"speed_box", json::array({interval_to_json(spec.speed_box.first),
                                       interval_to_json(spec.speed_box.second)})}};
  if (spec.rotor_bwd) j["rotor_bwd"] = rotor_to_json(*spec.rotor_bwd);
  return j;
}

inline TendonLaw parse_tendon(const json& j) {
  const std::string where = "model.vsa.law";
  if (!j.is_object()) throw Error(Errc::config_parse, where + " must be an object");
  const json& kind = field(j, "kind", where);
  if (!kind.is_string()) throw Error(Errc::config_parse, where + ".kind must be a string");
  const auto name = kind.get<std::string>();
  if (name == "quadratic") {
    reject_unknown(j, {"kind", "k"}, where);
    return TendonLaw{QuadraticTendon{number(j, "k", where)}};
  }
  if (name == "exponential") {
    reject_unknown(j, {"kind", "k", "alpha"}, where);
    return TendonLaw{ExponentialTendon{number(j, "k", where), number(j, "alpha", where)}};
  }
  if (name == "cubic") {
    reject_unknown(j, {"kind", "k"}, where);
    return TendonLaw{CubicTendon{number(j, "k", where)}};
  }
  throw Error(Errc::config_parse, "unknown tendon law kind '" + name + "'");
}

inline json tendon_to_json(const TendonLaw& law) {
  return std::visit(
      [](const auto& l) -> json {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, QuadraticTendon>) return {{"kind", "quadratic"}, {"k", l.k}};
        else if constexpr (std::is_same_v<L, ExponentialTendon>)
          return {{"kind", "exponential"}, {"k", l.k}, {"alpha", l.alpha}};
        else return {{"kind", "cubic"}, {"k", l.k}};
      },
      law.kind());
}

inline VsaConfig parse_vsa(const json& j) {
  const std::string where = "model.vsa";
  reject_unknown(j, {"law", "pulley_radius", "state"}, where);
  VsaConfig cfg{parse_tendon(field(j, "law", where)), number(j, "pulley_radius", where), {1.0, 1.0}};
  if (j.contains("state")) cfg.state = pair(j["state"], where + ".state");
  validate(cfg);
  return cfg;
}

inline json vsa_to_json(const VsaConfig& cfg) {
  return {{"law", tendon_to_json(cfg.law)},
          {"pulley_radius", cfg.pulley_radius},
          {"state", pair_to_json(cfg.state)}};
}

inline ModelSection parse_model(const json& root) {
  if (!root.contains("model")) return std::monostate{};
  const json& m = root["model"];
  reject_unknown(m, {"rotor_geometry", "dual_rotor", "vsa"}, "model");
  if (m.size() != 1)
    throw Error(Errc::config_parse, "model must contain exactly one of rotor_geometry, dual_rotor, vsa");
  if (m.contains("rotor_geometry")) return parse_geometry(m["rotor_geometry"], "model.rotor_geometry");
  if (m.contains("dual_rotor")) return parse_dual_rotor(m["dual_rotor"]);
  return parse_vsa(m["vsa"]);
}

inline json model_to_json(const ModelSection& model) {
  return std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<M, RotorGeometry>) return {{"rotor_geometry", geometry_to_json(m)}};
        else if constexpr (std::is_same_v<M, DualRotorSpec>) return {{"dual_rotor", dual_rotor_to_json(m)}};
        else return {{"vsa", vsa_to_json(m)}};
      },
      model);
}

inline ScenarioParams parse_params(Scenario scenario, const json& root) {
  const std::string key(to_string(scenario));
  const json empty = json::object();
  const json& p = root.contains(key) ? root[key] : empty;
  const std::string where = key;
  switch (scenario) {
    case Scenario::derive_coeffs: {
      reject_unknown(p, {"sample_speed", "sample_inflow", "panels"}, where);
      DeriveParams d;
      d.sample_speed = number_or(p, "sample_speed", where, d.sample_speed);
      d.sample_inflow = number_or(p, "sample_inflow", where, d.sample_inflow);
      if (p.contains("panels")) d.panels = integer(p, "panels", where);
      return d;
    }
    case Scenario::fiber_sweep: {
      reject_unknown(p, {"start", "level", "u1_start", "u1_end", "steps", "nu_bar"}, where);
      FiberSweepParams f;
      if (p.contains("start")) f.start = pair(p["start"], where + ".start");
      if (p.contains("level")) f.level = number(p, "level", where);
      if (p.contains("u1_start")) f.u1_start = number(p, "u1_start", where);
      if (!f.start && !(f.level && f.u1_start))
        throw Error(Errc::config_parse, "missing field 'start' (or 'level' with 'u1_start') in " + where);
      if (f.start && (f.level || f.u1_start))
        throw Error(Errc::config_parse, "give either 'start' or 'level'/'u1_start' in " + where);
      f.u1_end = number(p, "u1_end", where);
      f.steps = integer(p, "steps", where);
      f.nu_bar = number_or(p, "nu_bar", where, 0.0);
      return f;
    }
    case Scenario::allocate: {
      reject_unknown(p, {"force_level", "sigma_des", "nu_bar"}, where);
      return AllocateParams{number(p, "force_level", where), number(p, "sigma_des", where),
                            number_or(p, "nu_bar", where, 0.0)};
    }
    case Scenario::simulate: {
      reject_unknown(p, {"mass", "nu0", "t_end", "dt", "schedule"}, where);
      SimulateParams s;
      s.mass = number(p, "mass", where);
      s.nu0 = number_or(p, "nu0", where, 0.0);
      s.t_end = number(p, "t_end", where);
      s.dt = number(p, "dt", where);
      const json& sched = field(p, "schedule", where);
      if (!sched.is_array() || sched.empty())
        throw Error(Errc::config_parse, "schedule must be a non-empty array");
      for (std::size_t i = 0; i < sched.size(); ++i) {
        const std::string w = where + ".schedule[" + std::to_string(i) + "]";
        reject_unknown(sched[i], {"t", "speeds", "f_ext"}, w);
        s.schedule.segments.push_back({number(sched[i], "t", w), pair(field(sched[i], "speeds", w), w + ".speeds"),
                                       number_or(sched[i], "f_ext", w, 0.0)});
      }
      return s;
    }
    case Scenario::verify: {
      reject_unknown(p, {"seed", "draws", "inject_hardening_violation"}, where);
      VerifyParams v;
      if (p.contains("seed")) {
        if (!p["seed"].is_number_unsigned())
          throw Error(Errc::config_parse, "field 'seed' in verify must be a non-negative integer");
        v.seed = p["seed"].get<std::uint64_t>();
      }
      if (p.contains("draws")) v.draws = integer(p, "draws", where);
      if (v.draws < 1) throw Error(Errc::config_parse, "field 'draws' in verify must be >= 1");
      if (p.contains("inject_hardening_violation")) {
        if (!p["inject_hardening_violation"].is_boolean())
          throw Error(Errc::config_parse, "field 'inject_hardening_violation' must be a boolean");
        v.inject_hardening_violation = p["inject_hardening_violation"].get<bool>();
      }
      return v;
    }
  }
  throw Error(Errc::config_parse, "unhandled scenario");
}

inline json params_to_json(const ScenarioParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DeriveParams>) {
          return {{"sample_speed", p.sample_speed}, {"sample_inflow", p.sample_inflow}, {"panels", p.panels}};
        } else if constexpr (std::is_same_v<P, FiberSweepParams>) {
          json j = {{"u1_end", p.u1_end}, {"steps", p.steps}, {"nu_bar", p.nu_bar}};
          if (p.start) j["start"] = pair_to_json(*p.start);
          if (p.level) j["level"] = *p.level;
          if (p.u1_start) j["u1_start"] = *p.u1_start;
          return j;
        } else if constexpr (std::is_same_v<P, AllocateParams>) {
          return {{"force_level", p.force_level}, {"sigma_des", p.sigma_des}, {"nu_bar", p.nu_bar}};
        } else if constexpr (std::is_same_v<P, SimulateParams>) {
          json sched = json::array();
          for (const auto& seg : p.schedule.segments)
            sched.push_back({{"t", seg.t_start}, {"speeds", pair_to_json(seg.speeds)}, {"f_ext", seg.external_force}});
          return {{"mass", p.mass}, {"nu0", p.nu0}, {"t_end", p.t_end}, {"dt", p.dt}, {"schedule", sched}};
        } else {
          return {{"seed", p.seed}, {"draws", p.draws}, {"inject_hardening_violation", p.inject_hardening_violation}};
        }
      },
      params);
}

}  // namespace config_detail

/// Parses and re-validates a run configuration.
inline RunConfig parse_config(const json& root) {
  using namespace config_detail;
  if (!root.is_object()) throw Error(Errc::config_parse, "config root must be an object");
  const json& scen = field(root, "scenario", "config");
  if (!scen.is_string()) throw Error(Errc::config_parse, "scenario must be a string");

  RunConfig cfg;
  cfg.scenario = parse_scenario(scen.get<std::string>());
  const std::string params_key(to_string(cfg.scenario));
  reject_unknown(root, {"scenario", "model", params_key}, "config");
  cfg.model = parse_model(root);
  cfg.params = parse_params(cfg.scenario, root);

  const bool needs_geometry = cfg.scenario == Scenario::derive_coeffs;
  const bool needs_dual = cfg.scenario == Scenario::allocate || cfg.scenario == Scenario::simulate;
  const bool needs_any = cfg.scenario == Scenario::fiber_sweep;
  if (needs_geometry && !std::holds_alternative<RotorGeometry>(cfg.model))
    throw Error(Errc::config_parse, "derive-coeffs needs a model.rotor_geometry section");
  if (needs_dual && !std::holds_alternative<DualRotorSpec>(cfg.model))
    throw Error(Errc::config_parse, params_key + " needs a model.dual_rotor section");
  if (needs_any && !std::holds_alternative<DualRotorSpec>(cfg.model) &&
      !std::holds_alternative<VsaConfig>(cfg.model))
    throw Error(Errc::config_parse, "fiber-sweep needs a model.dual_rotor or model.vsa section");
  if (cfg.scenario == Scenario::verify && !std::holds_alternative<std::monostate>(cfg.model))
    throw Error(Errc::config_parse, "verify draws its own models; remove the model section");

  if (const auto* g = std::get_if<RotorGeometry>(&cfg.model)) validate_geometry_allowing_zero_pitch(*g);
  if (const auto* d = std::get_if<DualRotorSpec>(&cfg.model)) (void)d->build();
  return cfg;
}

inline RunConfig parse_config_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::config_parse, e.what());
  }
  return parse_config(root);
}

inline json to_json(const RunConfig& cfg) {
  using namespace config_detail;
  json root = {{"scenario", std::string(to_string(cfg.scenario))}};
  if (!std::holds_alternative<std::monostate>(cfg.model)) root["model"] = model_to_json(cfg.model);
  root[std::string(to_string(cfg.scenario))] = params_to_json(cfg.params);
  return root;
}

}  // namespace vada
