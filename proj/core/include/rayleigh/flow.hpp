#pragma once

#include "rayleigh/vectorfield.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rayleigh {

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double escape_norm = 1e6;  // |state| beyond this counts as blow-up
  long max_steps = 20'000'000;
};

/// Integration failures carry the last valid state so callers can report
/// where the orbit was lost.
class FlowError : public std::runtime_error {
 public:
  enum class Kind { StepUnderflow, Escape, NoReturn, TooManySteps };

  FlowError(Kind kind, const std::string& message, double t_last, Vec2 state_last)
      : std::runtime_error(message), kind(kind), t_last(t_last), state_last(state_last) {}

  Kind kind;
  double t_last;
  Vec2 state_last;
};

struct TrajectoryState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct TrajectoryMeta {
  std::string system_id;
  double rtol = 0.0;
  double atol = 0.0;
  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evaluations = 0;
};

/// Sampled orbit. Times are strictly monotone in the direction of
/// integration (increasing forward, decreasing for negative t_end).
struct Trajectory {
  std::vector<TrajectoryState> states;
  TrajectoryMeta meta;
};

enum class SectionTag { PositiveXAxis };

struct SectionEvent {
  double t = 0.0;
  Vec2 state;
  SectionTag section = SectionTag::PositiveXAxis;
  int crossing_direction = 0;  // sign of y' at the crossing
};

/// Adaptive Dormand-Prince 5(4) integration from x0 over [0, t_end]
/// (t_end < 0 integrates backward). Local error per step is held below
/// rtol * |state| + atol componentwise; states are recorded at accepted
/// steps. Throws FlowError on step underflow or escape past escape_norm.
Trajectory integrate(const PlanarPolySystem& sys, Vec2 x0, double t_end,
                     const IntegrationOptions& opts = {});

/// First return to the section {y = 0, x > 0} in the same crossing
/// direction, starting from (r, 0). The crossing is located on the dense
/// output to |y| <= 1e-12. Throws FlowError(NoReturn) when the orbit fails
/// to come back within t_max.
SectionEvent first_return(const PlanarPolySystem& sys, double r,
                          const IntegrationOptions& opts = {});

/// Full-control version used by the limit-cycle machinery.
struct ReturnOptions {
  IntegrationOptions integration;
  bool backward = false;              // integrate the time-reversed field
  bool accumulate_divergence = false; // carry s' = div(P, Q) along the orbit
  bool record_path = false;
  double record_dt = 0.0;             // 0: accepted-step endpoints only
  double t_max = 0.0;                 // 0: default 50 * 2 pi
};

struct ReturnResult {
  SectionEvent event;
  double div_integral = 0.0;  // meaningful when accumulate_divergence is set
  double max_abs_y = 0.0;
  std::vector<TrajectoryState> path;
  TrajectoryMeta meta;
};

ReturnResult section_return(const CompiledSystem& sys, double r, const ReturnOptions& opts);

/// Fixed-time endpoint of the flow (no recording, no events); dt > 0,
/// backward integrates the reversed field.
Vec2 advance(const CompiledSystem& sys, Vec2 x0, double dt, bool backward,
             const IntegrationOptions& opts = {});

struct AugmentedState {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;  // accumulated integral of the divergence
};

AugmentedState advance_with_divergence(const CompiledSystem& sys, AugmentedState z0, double dt,
                                       bool backward, const IntegrationOptions& opts = {});

/// Orbit sampling helper for portraits: integrate from x0 (forward or the
/// reversed field) until t_max, escape past escape_radius, or the state
/// shrinks under settle_radius.
struct OrbitSampleOptions {
  IntegrationOptions integration;
  bool backward = false;
  double t_max = 60.0;
  double escape_radius = 40.0;
  double settle_radius = 1e-3;
  double record_dt = 0.08;
};

std::vector<TrajectoryState> sample_orbit(const CompiledSystem& sys, Vec2 x0,
                                          const OrbitSampleOptions& opts);

}  // namespace rayleigh
