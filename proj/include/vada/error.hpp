#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vada {

enum class Errc {
  invalid_geometry,
  invalid_model,
  negative_speed,
  too_few_panels,
  out_of_box,
  zero_sensitivity,
  left_admissible_box,
  newton_divergence,
  degenerate_path,
  inadmissible_deflection,
  inadmissible_state,
  regime_violation,
  invalid_request,
  invalid_step,
  schedule_gap,
  config_parse,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_geometry: return "invalid-geometry";
    case Errc::invalid_model: return "invalid-model";
    case Errc::negative_speed: return "negative-speed";
    case Errc::too_few_panels: return "too-few-panels";
    case Errc::out_of_box: return "out-of-box";
    case Errc::zero_sensitivity: return "zero-sensitivity";
    case Errc::left_admissible_box: return "left-admissible-box";
    case Errc::newton_divergence: return "newton-divergence";
    case Errc::degenerate_path: return "degenerate-path";
    case Errc::inadmissible_deflection: return "inadmissible-deflection";
    case Errc::inadmissible_state: return "inadmissible-state";
    case Errc::regime_violation: return "regime-violation";
    case Errc::invalid_request: return "invalid-request";
    case Errc::invalid_step: return "invalid-step";
    case Errc::schedule_gap: return "schedule-gap";
    case Errc::config_parse: return "config-parse";
  }
  return "unknown";
}

/// Exception carrying a machine-readable error kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vada
