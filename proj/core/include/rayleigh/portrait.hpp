#pragma once

#include "rayleigh/flow.hpp"
#include "rayleigh/limitcycle.hpp"
#include "rayleigh/localanalysis.hpp"
#include "rayleigh/vectorfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rayleigh {

/// The three global pictures, split by the sign of a.
enum class PortraitClass { A_NEG, CENTER, A_POS };

std::string to_string(PortraitClass c);

/// Projection of the plane into the open unit disc,
/// (x, y) -> (x, y) / sqrt(1 + x^2 + y^2); monotone in radius.
struct DiscPoint {
  double x = 0.0;
  double y = 0.0;
};

DiscPoint disc_project(double x, double y);

struct OrbitSample {
  std::vector<DiscPoint> points;  // traversed in forward time
  bool closed = false;            // rendered as a loop (center orbits)
  bool qualitative = false;       // sector hint near a degenerate infinite point
};

struct PortraitCycle {
  LimitCycleRecord record;
  std::vector<DiscPoint> polyline;
};

struct PortraitModel {
  RayleighParams params{Rational(0), 1};
  SystemForm form = SystemForm::Eq2;
  EquilibriumReport origin;
  std::vector<EquilibriumReport> infinite;  // classified, diametral pairs adjacent
  std::optional<PortraitCycle> cycle;       // present iff a != 0
  std::vector<OrbitSample> orbits;
  PortraitClass class_tag = PortraitClass::CENTER;
  int orientation = 1;  // (-1)^(d-1)
};

struct PortraitOptions {
  IntegrationOptions cycle_integration;  // defaults are the analysis tolerances
  double orbit_rtol = 1e-7;              // orbit fans are visual; keep them cheap
  double orbit_atol = 1e-9;
  int radial_seeds = 8;
  double seed_lo = 0.05;
  double seed_hi = 9.0;
  double t_max = 60.0;
};

PortraitModel build_portrait(const RayleighParams& params, SystemForm form,
                             const PortraitOptions& opts = {});

enum class Equivalence { Equivalent, Distinct };

/// Two portraits compare equivalent exactly when they carry the same class
/// tag; the tag is computed from the model's features, so any two a < 0
/// members match regardless of n.
Equivalence topological_class(const PortraitModel& p1, const PortraitModel& p2);

/// SVG 1.1 document: one boundary circle, kind-specific equilibrium glyphs,
/// the cycle as a single highlighted closed path, orbit polylines with
/// arrowheads in the direction of time. size_px must be >= 200.
std::string render_svg(const PortraitModel& model, int size_px);

}  // namespace rayleigh
