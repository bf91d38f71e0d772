#pragma once
// Two-channel antagonistic scalar-task actuator. Channel "plus" adds h1(u1) to
// the task output, channel "minus" subtracts h2(u2). Tendon-driven joints and
// dual-rotor force actuators are both instances of this abstraction.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vada/error.hpp"

namespace vada {

/// A channel law provides its output map, the analytic derivative of that map,
/// its contribution to the passive coefficient, and the derivative of that
/// contribution. The sign conditions g > 0, p > 0, dp/du > 0 are not enforced
/// here; the property sweeps are what detect violations.
template <class Law>
concept ChannelLaw = requires(const Law& law, double u) {
  { law.output(u) } -> std::convertible_to<double>;
  { law.output_sensitivity(u) } -> std::convertible_to<double>;
  { law.passive_coeff(u) } -> std::convertible_to<double>;
  { law.passive_hardening(u) } -> std::convertible_to<double>;
};

/// Command pair (u1, u2): tendon displacements or rotor speeds.
struct CommandPair {
  double u1 = 0.0;
  double u2 = 0.0;

  friend bool operator==(const CommandPair&, const CommandPair&) = default;
};

/// Open interval (lower, upper). upper may be +inf.
struct Interval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double u) const noexcept { return u > lower && u < upper; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct AdmissibleBox {
  Interval first;
  Interval second;

  bool contains(const CommandPair& u) const noexcept {
    return first.contains(u.u1) && second.contains(u.u2);
  }

  friend bool operator==(const AdmissibleBox&, const AdmissibleBox&) = default;
};

/// Channel law assembled from four callables. Handy for ad-hoc laws in tests
/// and for laws whose parameters are only known at run time.
template <class H, class G, class P, class DP>
struct LambdaChannel {
  H h;
  G g;
  P p;
  DP dp;

  double output(double u) const { return h(u); }
  double output_sensitivity(double u) const { return g(u); }
  double passive_coeff(double u) const { return p(u); }
  double passive_hardening(double u) const { return dp(u); }
};

template <class H, class G, class P, class DP>
LambdaChannel(H, G, P, DP) -> LambdaChannel<H, G, P, DP>;

template <ChannelLaw Plus, ChannelLaw Minus = Plus>
class AntagonisticActuator {
 public:
  AntagonisticActuator(Plus plus, Minus minus, AdmissibleBox box)
      : plus_(std::move(plus)), minus_(std::move(minus)), box_(box) {
    if (!(box_.first.lower >= 0.0) || !(box_.second.lower >= 0.0) ||
        !(box_.first.upper > box_.first.lower) || !(box_.second.upper > box_.second.lower))
      throw Error(Errc::invalid_request, "admissible box needs 0 <= lower < upper on both channels");
  }

  const Plus& plus() const noexcept { return plus_; }
  const Minus& minus() const noexcept { return minus_; }
  const AdmissibleBox& box() const noexcept { return box_; }

  void require_in_box(const CommandPair& u) const {
    if (!box_.contains(u))
      throw Error(Errc::out_of_box, "command pair (" + std::to_string(u.u1) + ", " +
                                        std::to_string(u.u2) + ") outside the admissible box");
  }

 private:
  Plus plus_;
  Minus minus_;
  AdmissibleBox box_;
};

/// Relative tolerance on fiber residuals, scaled by max(1, |level|).
inline constexpr double fiber_tolerance = 1e-10;
inline constexpr int fiber_newton_max_iterations = 50;

template <class Plus, class Minus>
double task_output(const AntagonisticActuator<Plus, Minus>& act, const CommandPair& u) {
  act.require_in_box(u);
  return act.plus().output(u.u1) - act.minus().output(u.u2);
}

template <class Plus, class Minus>
double passive_coefficient(const AntagonisticActuator<Plus, Minus>& act, const CommandPair& u) {
  act.require_in_box(u);
  return act.plus().passive_coeff(u.u1) + act.minus().passive_coeff(u.u2);
}

/// Euclidean norm of the task-map gradient (fiber density).
template <class Plus, class Minus>
double promptness(const AntagonisticActuator<Plus, Minus>& act, const CommandPair& u) {
  act.require_in_box(u);
  return std::hypot(act.plus().output_sensitivity(u.u1), act.minus().output_sensitivity(u.u2));
}

/// du2/du1 along the fiber through u.
template <class Plus, class Minus>
double fiber_tangent(const AntagonisticActuator<Plus, Minus>& act, const CommandPair& u) {
  act.require_in_box(u);
  const double g2 = act.minus().output_sensitivity(u.u2);
  if (!(g2 > 0.0))
    throw Error(Errc::zero_sensitivity, "minus channel has nonpositive output sensitivity");
  return act.plus().output_sensitivity(u.u1) / g2;
}

/// Solves h1(u1) - h2(u2) = level for u2 by Newton iteration from `seed`.
/// Throws left-admissible-box if an iterate leaves the second channel's
/// interval, newton-divergence if the tolerance is not met in time.
template <class Plus, class Minus>
double project_to_fiber(const AntagonisticActuator<Plus, Minus>& act, double u1, double level,
                        double seed) {
  if (!act.box().first.contains(u1))
    throw Error(Errc::left_admissible_box, "u1 = " + std::to_string(u1) + " outside the box");
  if (!act.box().second.contains(seed))
    throw Error(Errc::left_admissible_box, "seed u2 outside the box");

  const double tol = fiber_tolerance * std::max(1.0, std::abs(level));
  const double h1 = act.plus().output(u1);
  double u2 = seed;
  for (int it = 0; it <= fiber_newton_max_iterations; ++it) {
    const double residual = h1 - act.minus().output(u2) - level;
    const double g2 = act.minus().output_sensitivity(u2);
    if (std::abs(residual) <= tol) {
      // One more step brings a quadratically converging iterate to rounding
      // level; keep it only if it helps.
      if (g2 > 0.0) {
        const double polished = u2 + residual / g2;
        if (act.box().second.contains(polished) &&
            std::abs(h1 - act.minus().output(polished) - level) < std::abs(residual))
          return polished;
      }
      return u2;
    }
    if (it == fiber_newton_max_iterations) break;
    if (!(g2 > 0.0))
      throw Error(Errc::zero_sensitivity, "minus channel sensitivity vanished during projection");
    u2 += residual / g2;
    if (!act.box().second.contains(u2))
      throw Error(Errc::left_admissible_box,
                  "corrector left the box at u2 = " + std::to_string(u2));
  }
  throw Error(Errc::newton_divergence, "fiber projection did not converge within " +
                                           std::to_string(fiber_newton_max_iterations) +
                                           " iterations");
}

struct FiberPath {
  double level = 0.0;
  std::vector<CommandPair> points;
  std::vector<double> residuals;
};

/// Traces the fiber through `start` from u1 = start.u1 to u1 = u1_end in
/// `steps` equal increments (steps + 1 points including the start). Each step
/// is an Euler predictor along the tangent followed by a Newton corrector.
template <class Plus, class Minus>
FiberPath trace_fiber(const AntagonisticActuator<Plus, Minus>& act, const CommandPair& start,
                      double u1_end, int steps) {
  const double level = task_output(act, start);
  if (!std::isfinite(level)) throw Error(Errc::invalid_request, "task output at start is not finite");
  if (steps < 0) throw Error(Errc::invalid_request, "steps must be >= 0");
  if (steps > 0 && !(u1_end > start.u1))
    throw Error(Errc::invalid_request, "u1_end must exceed the start u1");

  FiberPath path;
  path.level = level;
  path.points.reserve(static_cast<std::size_t>(steps) + 1);
  path.residuals.reserve(static_cast<std::size_t>(steps) + 1);
  path.points.push_back(start);
  path.residuals.push_back(0.0);

  const double du1 = steps > 0 ? (u1_end - start.u1) / steps : 0.0;
  CommandPair current = start;
  for (int k = 1; k <= steps; ++k) {
    const double u1 = (k == steps) ? u1_end : start.u1 + du1 * k;
    double predicted = current.u2 + fiber_tangent(act, current) * (u1 - current.u1);
    if (!act.box().second.contains(predicted)) predicted = current.u2;
    double u2 = 0.0;
    try {
      u2 = project_to_fiber(act, u1, level, predicted);
    } catch (const Error& e) {
      throw Error(e.code(), "fiber step " + std::to_string(k) + ": " + e.what());
    }
    current = {u1, u2};
    path.points.push_back(current);
    path.residuals.push_back(std::abs(task_output(act, current) - level));
  }
  return path;
}

enum class SweepQuantity { passive, promptness };

struct MonotonicityReport {
  std::vector<double> values;
  bool strictly_increasing = true;
  std::optional<double> min_increment;  // absent for single-point paths
};

/// Strict increase means every adjacent difference is > 0, with no slack.
template <class Plus, class Minus>
MonotonicityReport monotonicity_sweep(const AntagonisticActuator<Plus, Minus>& act,
                                      const FiberPath& path, SweepQuantity which) {
  MonotonicityReport report;
  report.values.reserve(path.points.size());
  for (const auto& u : path.points)
    report.values.push_back(which == SweepQuantity::passive ? passive_coefficient(act, u)
                                                            : promptness(act, u));
  for (std::size_t i = 1; i < report.values.size(); ++i) {
    const double inc = report.values[i] - report.values[i - 1];
    if (!(inc > 0.0)) report.strictly_increasing = false;
    if (!report.min_increment || inc < *report.min_increment) report.min_increment = inc;
  }
  return report;
}

struct PassivePromptnessSample {
  double passive = 0.0;
  double promptness = 0.0;
};

struct RelationReport {
  std::vector<PassivePromptnessSample> pairs;
  bool monotone = false;
};

/// Pairs (passive coefficient, promptness) along the path. The relation is
/// monotone when the passive coefficient is strictly monotone along the path
/// and promptness moves in the same direction at every step, so the flag does
/// not depend on the traversal direction.
template <class Plus, class Minus>
RelationReport passive_promptness_relation(const AntagonisticActuator<Plus, Minus>& act,
                                           const FiberPath& path) {
  if (path.points.size() < 2)
    throw Error(Errc::degenerate_path, "relation needs at least two points");
  for (std::size_t i = 1; i < path.points.size(); ++i)
    if (path.points[i] == path.points[i - 1])
      throw Error(Errc::degenerate_path, "path repeats a point at index " + std::to_string(i));

  RelationReport report;
  report.pairs.reserve(path.points.size());
  for (const auto& u : path.points)
    report.pairs.push_back({passive_coefficient(act, u), promptness(act, u)});

  int direction = 0;
  report.monotone = true;
  for (std::size_t i = 1; i < report.pairs.size(); ++i) {
    const double ds = report.pairs[i].passive - report.pairs[i - 1].passive;
    const double dr = report.pairs[i].promptness - report.pairs[i - 1].promptness;
    const int step_dir = ds > 0.0 ? 1 : (ds < 0.0 ? -1 : 0);
    if (step_dir == 0 || (direction != 0 && step_dir != direction) || !(ds * dr > 0.0)) {
      report.monotone = false;
      break;
    }
    direction = step_dir;
  }
  return report;
}

}  // namespace vada
