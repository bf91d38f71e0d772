#include "vada/scenarios.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

namespace vada {
namespace {

RunConfig load(const std::string& name) {
  std::ifstream in(std::string(VADA_CONFIG_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const OutputFile* file_named(const ScenarioResult& r, const std::string& name) {
  for (const auto& f : r.files)
    if (f.name == name) return &f;
  return nullptr;
}

TEST(DeriveCoeffs, ReferenceGeometry) {
  const auto r = run_scenario(load("derive_coeffs.json"));
  ASSERT_EQ(r.exit_code, exit_ok) << r.record.dump();
  EXPECT_NEAR(r.record["k_thrust"].get<double>(), 1.0262536001726662e-05, 1e-12 * 1.0262536001726662e-05);
  EXPECT_NEAR(r.record["k_inflow"].get<double>(), 0.0007696902001294995, 1e-12 * 0.0007696902001294995);
  EXPECT_LE(r.record["quadrature_residual"].get<double>(), 1e-12);
  EXPECT_TRUE(r.record["warnings"].empty());
}

TEST(DeriveCoeffs, ZeroPitchWarns) {
  RunConfig cfg = load("derive_coeffs.json");
  std::get<RotorGeometry>(cfg.model).pitch_angle = 0.0;
  const auto r = run_scenario(cfg);
  EXPECT_EQ(r.exit_code, exit_ok);
  EXPECT_EQ(r.record["k_thrust"].get<double>(), 0.0);
  EXPECT_EQ(r.record["warnings"].size(), 1u);
}

TEST(Allocate, SampleOutput) {
  const auto r = run_scenario(load("allocate.json"));
  ASSERT_EQ(r.exit_code, exit_ok);
  EXPECT_TRUE(r.record["feasible"].get<bool>());
  EXPECT_EQ(r.record["speeds"][0].get<double>(), 2.375);
  EXPECT_EQ(r.record["speeds"][1].get<double>(), 1.625);
  EXPECT_EQ(r.record["common_mode"].get<double>(), 4.0);
  EXPECT_EQ(r.record["differential_mode"].get<double>(), 0.75);
  EXPECT_EQ(r.record["method"], "closed_form");
}

TEST(Allocate, InfeasibleExitsNegative) {
  const auto r = run_scenario(load("allocate_infeasible.json"));
  EXPECT_EQ(r.exit_code, exit_negative);
  EXPECT_FALSE(r.record["feasible"].get<bool>());
  EXPECT_TRUE(r.record.contains("reason"));
}

TEST(Allocate, InvalidRequestExitsUsage) {
  RunConfig cfg = load("allocate.json");
  std::get<AllocateParams>(cfg.params).sigma_des = -1.0;
  const auto r = run_scenario(cfg);
  EXPECT_EQ(r.exit_code, exit_usage);
  EXPECT_EQ(r.record["error"], "invalid-request");
}

TEST(FiberSweep, VadaPasses) {
  for (const char* name : {"fiber_sweep_vada.json", "fiber_sweep_vada_trim.json"}) {
    SCOPED_TRACE(name);
    const auto r = run_scenario(load(name));
    ASSERT_EQ(r.exit_code, exit_ok) << r.record.dump();
    EXPECT_EQ(fiber_verdict_line(r.record), "verdict passive_coeff=pass promptness=pass");
    EXPECT_LE(r.record["max_residual"].get<double>(), 1e-10 * std::max(1.0, std::abs(r.record["level"].get<double>())));
    const auto* csv = file_named(r, "fiber.csv");
    ASSERT_NE(csv, nullptr);
    EXPECT_EQ(csv->content.rfind(fiber_csv_header, 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv->content.begin(), csv->content.end(), '\n')),
              r.record["points"].get<std::size_t>() + 1);
  }
}

TEST(FiberSweep, VsaPassesAndZeroStepsIsVacuous) {
  RunConfig cfg = load("fiber_sweep_vsa.json");
  EXPECT_EQ(run_scenario(cfg).exit_code, exit_ok);
  std::get<FiberSweepParams>(cfg.params).steps = 0;
  std::get<FiberSweepParams>(cfg.params).u1_end = 1.0;
  const auto r = run_scenario(cfg);
  EXPECT_EQ(r.exit_code, exit_ok);
  EXPECT_EQ(fiber_verdict_line(r.record), "verdict passive_coeff=vacuous promptness=vacuous");
}

TEST(FiberSweep, RegimeViolationExitsNegative) {
  RunConfig cfg = load("fiber_sweep_vada_trim.json");
  std::get<FiberSweepParams>(cfg.params).nu_bar = 10.0;
  const auto r = run_scenario(cfg);
  EXPECT_EQ(r.exit_code, exit_negative);
  EXPECT_EQ(r.record["error"], "regime-violation");
}

TEST(Simulate, CocontractionStepKeepsEquilibriumRaisesDamping) {
  const auto r = run_scenario(load("simulate_cocontraction_step.json"));
  ASSERT_EQ(r.exit_code, exit_ok);
  const auto& segs = r.record["segments"];
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_NEAR(segs[0]["nu_eq"].get<double>(), segs[1]["nu_eq"].get<double>(), 1e-12);
  EXPECT_GT(segs[1]["c_app"].get<double>(), segs[0]["c_app"].get<double>());
  for (const auto& s : segs) EXPECT_LE(s["fit_relative_deviation"].get<double>(), 1e-4);
  ASSERT_NE(file_named(r, "trajectory.csv"), nullptr);
  ASSERT_NE(file_named(r, "trajectory.json"), nullptr);
  EXPECT_EQ(r.record["samples"].get<int>(), 6001);
  EXPECT_EQ(r.record["final"]["t"].get<double>(), 6.0);
}

TEST(Verify, DefaultSeedPassesAndIsDeterministic) {
  const RunConfig cfg = load("verify.json");
  const auto a = run_scenario(cfg);
  const auto b = run_scenario(cfg);
  ASSERT_EQ(a.exit_code, exit_ok) << a.record.dump(2);
  EXPECT_TRUE(a.record["failed_properties"].empty());
  ASSERT_NE(file_named(a, "report.json"), nullptr);
  EXPECT_EQ(file_named(a, "report.json")->content, file_named(b, "report.json")->content);
  EXPECT_EQ(a.record.dump(), b.record.dump());
}

TEST(Verify, InjectedHardeningViolationFails) {
  const auto r = run_scenario(load("verify_injected.json"));
  EXPECT_EQ(r.exit_code, exit_negative);
  const auto failed = r.record["failed_properties"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(failed.begin(), failed.end(), "vada_damping_cocontraction"), failed.end());
}

TEST(Verify, OtherSeedsPass) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RunConfig cfg = load("verify.json");
    std::get<VerifyParams>(cfg.params).seed = seed;
    const auto r = run_scenario(cfg);
    EXPECT_EQ(r.exit_code, exit_ok) << "seed " << seed << ": " << r.record.dump();
  }
}

}  // namespace
}  // namespace vada
