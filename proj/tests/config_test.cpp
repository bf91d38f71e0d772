#include "vada/config.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "vada/serialization.hpp"

#ifndef VADA_CONFIG_DIR
#error "VADA_CONFIG_DIR must point at the sample configs"
#endif

namespace vada {
namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(VADA_CONFIG_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc parse_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error for " << text;
  return Errc::invalid_model;
}

TEST(Config, SampleConfigsRoundTrip) {
  for (const char* name : {"derive_coeffs.json", "fiber_sweep_vada.json", "fiber_sweep_vada_trim.json",
                           "fiber_sweep_vsa.json", "allocate.json", "allocate_infeasible.json",
                           "simulate_cocontraction_step.json", "verify.json", "verify_injected.json"}) {
    SCOPED_TRACE(name);
    const RunConfig cfg = parse_config_text(slurp(name));
    const json dumped = to_json(cfg);
    EXPECT_EQ(parse_config(dumped), cfg);
    EXPECT_EQ(to_json(parse_config(dumped)), dumped);
  }
}

TEST(Config, AllocateSample) {
  const RunConfig cfg = parse_config_text(slurp("allocate.json"));
  EXPECT_EQ(cfg.scenario, Scenario::allocate);
  const auto& p = std::get<AllocateParams>(cfg.params);
  EXPECT_EQ(p.force_level, 3.0);
  EXPECT_EQ(p.sigma_des, 4.0);
  const DualRotor dr = std::get<DualRotorSpec>(cfg.model).build();
  EXPECT_TRUE(dr.identical_rotors());
  EXPECT_EQ(dr.rotor_fwd, (AffineThrustModel{1.0, 1.0}));
}

TEST(Config, GeometryRotorDerivesCoefficients) {
  const RunConfig cfg = parse_config_text(R"({
    "scenario": "allocate",
    "model": {"dual_rotor": {"rotor_fwd": {"geometry": {"blade_count": 2, "radius": 0.1, "chord": 0.01,
      "pitch_angle": 0.1, "lift_slope": 5.7, "air_density": 1.2}}}},
    "allocate": {"force_level": 0, "sigma_des": 1}})");
  const DualRotor dr = std::get<DualRotorSpec>(cfg.model).build();
  EXPECT_EQ(dr.rotor_fwd, derive_coefficients({2, 0.1, 0.01, 0.1, 5.7, 1.2}));
}

TEST(Config, MissingFieldIsNamed) {
  std::string msg;
  EXPECT_EQ(parse_error(R"({"scenario": "allocate", "model": {"dual_rotor": {"rotor_fwd": {"k_thrust": 1, "k_inflow": 1}}},
                           "allocate": {"force_level": 3}})",
                        &msg),
            Errc::config_parse);
  EXPECT_NE(msg.find("sigma_des"), std::string::npos) << msg;
}

TEST(Config, ExactlyOneModelSection) {
  EXPECT_EQ(parse_error(R"({"scenario": "allocate", "model": {}, "allocate": {"force_level": 3, "sigma_des": 4}})"),
            Errc::config_parse);
  EXPECT_EQ(parse_error(R"({"scenario": "allocate",
      "model": {"dual_rotor": {"rotor_fwd": {"k_thrust": 1, "k_inflow": 1}},
                "vsa": {"law": {"kind": "quadratic", "k": 1}, "pulley_radius": 1}},
      "allocate": {"force_level": 3, "sigma_des": 4}})"),
            Errc::config_parse);
  // The model kind must suit the scenario.
  EXPECT_EQ(parse_error(R"({"scenario": "allocate", "model": {"vsa": {"law": {"kind": "quadratic", "k": 1},
      "pulley_radius": 1}}, "allocate": {"force_level": 3, "sigma_des": 4}})"),
            Errc::config_parse);
  EXPECT_EQ(parse_error(R"({"scenario": "allocate", "allocate": {"force_level": 3, "sigma_des": 4}})"),
            Errc::config_parse);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(parse_error(R"({"scenario": "verify", "verify": {"seeds": 3}})"), Errc::config_parse);
  EXPECT_EQ(parse_error(R"({"scenario": "fly"})"), Errc::config_parse);
  EXPECT_EQ(parse_error("{not json"), Errc::config_parse);
  EXPECT_EQ(parse_error(R"({"scenario": "verify", "verify": {"seed": -1}})"), Errc::config_parse);
  EXPECT_EQ(parse_error(R"({"scenario": "verify", "extra": 1})"), Errc::config_parse);
}

TEST(Config, VerifyDefaults) {
  const RunConfig cfg = parse_config_text(R"({"scenario": "verify"})");
  const auto& p = std::get<VerifyParams>(cfg.params);
  EXPECT_EQ(p.seed, default_verify_seed);
  EXPECT_FALSE(p.inject_hardening_violation);
}

TEST(Serialization, DoublesRoundTripExactly) {
  for (double x : {0.1, 1.0 / 3.0, 0.8646647167633873, -2.5e-300, 1e308, 0.0})
    EXPECT_EQ(parse_double(format_double(x)), x);
  EXPECT_THROW(parse_double("1.5abc"), Error);
}

TEST(Serialization, TrajectoryCsvRoundTrip) {
  Trajectory traj;
  traj.dt = 0.1;
  for (int k = 0; k < 5; ++k)
    traj.samples.push_back({0.1 * k, 1.0 / (k + 3.0), 2.0, 1.0, -0.1 * k / 7.0, 0.25});
  std::stringstream ss;
  write_trajectory_csv(ss, traj);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), trajectory_csv_header);
  EXPECT_EQ(read_trajectory_csv(ss), traj.samples);
}

}  // namespace
}  // namespace vada
