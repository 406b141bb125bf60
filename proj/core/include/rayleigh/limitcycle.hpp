#pragma once

#include "rayleigh/flow.hpp"
#include "rayleigh/vectorfield.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rayleigh {

struct ReturnMapSample {
  double r_in = 0.0;
  double r_out = 0.0;
  double period = 0.0;
  double err_est = 0.0;
};

enum class CycleStability { Stable, Unstable };

std::string to_string(CycleStability s);

/// A detected limit cycle. multiplier is the derivative of the forward
/// return map at the fixed point; stability == Stable iff multiplier < 1.
struct LimitCycleRecord {
  double r_star = 0.0;
  double period = 0.0;
  double multiplier = 0.0;
  CycleStability stability = CycleStability::Stable;
  double amp_x = 0.0;  // section radius (the crossing is on y = 0)
  double amp_y = 0.0;  // extremal |y| along the cycle
  double div_exponent = 0.0;  // integral of the divergence over one period
  double residual = 0.0;      // |P(r_star) - r_star| as measured
  bool multiplier_check_ok = true;  // finite difference vs exp(div integral) within 5%
  bool measured_backward = false;   // diagnostics: map sampled on the reversed field
  // "central-difference" for mildly contracting cycles; "renormalized-legs"
  // when |log mu| is large and a single map difference would sit below the
  // floating-point noise floor of the section map
  std::string multiplier_method = "central-difference";
};

struct NoCycleFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CycleOptions {
  IntegrationOptions integration;
};

/// Whether the return map has to be sampled on the time-reversed field for
/// the map to be globally defined (the cycle must attract the sampling
/// direction; on the other side orbits outside the cycle escape to infinity
/// in finite time and never re-cross the section).
bool map_needs_backward_time(const RayleighParams& params, SystemForm form);

/// One sample of the forward return map at radius r. err_est comes from
/// differencing against a 10x coarser tolerance run.
ReturnMapSample return_map(const RayleighParams& params, SystemForm form, double r,
                           const CycleOptions& opts = {});

/// Locate the unique limit cycle as the fixed point of the section return
/// map: bracket, bisect to 1e-6, secant-polish to |P(r)-r| <= 1e-9, then
/// measure the multiplier by central differences and cross-check it against
/// exp of the divergence integral along the cycle. Throws NoCycleFound when
/// no bracket with a sign change exists (a = 0).
LimitCycleRecord find_cycle(const RayleighParams& params, SystemForm form,
                            std::optional<std::pair<double, double>> bracket = std::nullopt,
                            const CycleOptions& opts = {});

/// Signs of P(r) - r across the grid (+1 / 0 / -1, with |P(r)-r| <= 1e-8
/// collapsing to 0) and the number of sign alternations. The map is sampled
/// in the direction that makes it globally defined; the alternation count is
/// direction-invariant.
struct UniquenessScan {
  int sign_changes = 0;
  std::vector<int> sign_pattern;
  std::vector<double> map_residuals;  // P(r) - r per grid point
};

UniquenessScan uniqueness_scan(const RayleighParams& params, SystemForm form,
                               const std::vector<double>& r_grid, const CycleOptions& opts = {});

std::vector<double> default_scan_grid(int points = 100, double lo = 0.05, double hi = 10.0);

/// First-order averaging amplitude: the section radius at which the mean
/// energy production a (1 - y^{2n}) y^2 over a circular orbit vanishes,
///   r = (2^{2n+1} / C(2n+2, n+1))^{1 / 2n}.
double averaging_amplitude(int n);

/// The cycle polyline sampled over one period (used by portraits).
std::vector<TrajectoryState> cycle_polyline(const RayleighParams& params, SystemForm form,
                                            const LimitCycleRecord& record,
                                            const CycleOptions& opts = {});

}  // namespace rayleigh
