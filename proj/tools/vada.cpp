// vada <scenario> --config <path> [--seed N] [--out <dir>]

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vada/config.hpp"
#include "vada/scenarios.hpp"

namespace {

int fail_usage(const std::string& message) {
  std::cerr << "vada: " << message << '\n';
  std::cout << vada::json{{"error", "usage"}, {"message", message}}.dump() << '\n';
  return vada::exit_usage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antagonistic actuation toolkit: rotor coefficients, fiber sweeps, allocation, "
               "simulation and property verification"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";

  for (const char* name : {"derive-coeffs", "fiber-sweep", "allocate", "simulate", "verify"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " scenario");
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--seed", seed, "override the verification seed");
    sub->add_option("--out", out_dir, "directory for CSV/JSON output files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vada::exit_usage;
  }
  const std::string scenario_name = app.get_subcommands().front()->get_name();

  vada::RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) return fail_usage("cannot open config file '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = vada::parse_config_text(buf.str());
  } catch (const vada::Error& e) {
    return fail_usage(e.what());
  }
  if (vada::to_string(cfg.scenario) != scenario_name)
    return fail_usage("config describes scenario '" + std::string(vada::to_string(cfg.scenario)) +
                      "' but '" + scenario_name + "' was requested");
  if (seed) {
    if (auto* p = std::get_if<vada::VerifyParams>(&cfg.params)) p->seed = *seed;
    else return fail_usage("--seed only applies to the verify scenario");
  }

  const vada::ScenarioResult result = vada::run_scenario(cfg);

  if (!result.files.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    for (const auto& file : result.files) {
      const auto path = std::filesystem::path(out_dir) / file.name;
      std::ofstream os(path, std::ios::binary);
      if (!os) return fail_usage("cannot write '" + path.string() + "'");
      os << file.content;
    }
  }

  if (cfg.scenario == vada::Scenario::fiber_sweep && result.record.contains("passive_coeff"))
    std::cerr << vada::fiber_verdict_line(result.record) << '\n';
  if (result.record.contains("message")) std::cerr << "vada: " << result.record["message"].get<std::string>() << '\n';
  std::cout << result.record.dump(2) << '\n';
  return result.exit_code;
}
