#include "rayleigh/limitcycle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rayleigh {

namespace {

double binomial_double(int n, int k) {
  double out = 1.0;
  for (int t = 0; t < k; ++t) out = out * (n - t) / (t + 1);
  return out;
}

struct MapSampler {
  CompiledSystem sys;
  bool backward;
  IntegrationOptions integration;

  MapSampler(const RayleighParams& params, SystemForm form, bool backward_,
             const IntegrationOptions& integration_)
      : sys(family_system(params, form)), backward(backward_), integration(integration_) {}

  ReturnResult full(double r, bool divergence = false, bool record = false,
                    double record_dt = 0.0) const {
    ReturnOptions opts;
    opts.integration = integration;
    opts.backward = backward;
    opts.accumulate_divergence = divergence;
    opts.record_path = record;
    opts.record_dt = record_dt;
    return section_return(sys, r, opts);
  }

  double radius(double r) const { return full(r).event.state.x; }
};

}  // namespace

std::string to_string(CycleStability s) {
  return s == CycleStability::Stable ? "stable" : "unstable";
}

bool map_needs_backward_time(const RayleighParams& params, SystemForm form) {
  // The cycle attracts in forward time exactly when the origin repels, i.e.
  // when the trace of the Jacobian at the origin is positive
  // (eq2: trace = -a, eq1: trace = a).
  const double a = params.a_value();
  const double trace = form == SystemForm::Eq2 ? -a : a;
  return trace < 0.0;
}

ReturnMapSample return_map(const RayleighParams& params, SystemForm form, double r,
                           const CycleOptions& opts) {
  if (!(r > 0.0) || r >= 100.0) {
    throw std::invalid_argument("return_map: r must lie in (0, 100)");
  }
  // The user-facing map is the forward map; for parameters where forward
  // orbits outside the cycle escape, the flow error propagates untouched.
  const MapSampler sampler(params, form, false, opts.integration);
  const ReturnResult fine = sampler.full(r);

  IntegrationOptions coarse = opts.integration;
  coarse.rtol = std::min(coarse.rtol * 10.0, 1e-3);
  coarse.atol = std::min(coarse.atol * 10.0, 1e-3);
  MapSampler coarse_sampler(params, form, false, coarse);

  ReturnMapSample sample;
  sample.r_in = r;
  sample.r_out = fine.event.state.x;
  sample.period = fine.event.t;
  sample.err_est = std::abs(coarse_sampler.radius(r) - sample.r_out);
  return sample;
}

std::vector<double> default_scan_grid(int points, double lo, double hi) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("default_scan_grid: need points >= 2 and 0 < lo < hi");
  }
  std::vector<double> grid(points);
  const double step = (std::log(hi) - std::log(lo)) / (points - 1);
  for (int k = 0; k < points; ++k) grid[k] = std::exp(std::log(lo) + k * step);
  grid.back() = hi;
  return grid;
}

UniquenessScan uniqueness_scan(const RayleighParams& params, SystemForm form,
                               const std::vector<double>& r_grid, const CycleOptions& opts) {
  if (r_grid.size() < 2) throw std::invalid_argument("uniqueness_scan: grid too small");
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    if (!(r_grid[k] > 0.0) || (k > 0 && r_grid[k] <= r_grid[k - 1])) {
      throw std::invalid_argument("uniqueness_scan: grid must be positive and increasing");
    }
  }

  const MapSampler sampler(params, form, map_needs_backward_time(params, form),
                           opts.integration);
  UniquenessScan scan;
  scan.sign_pattern.reserve(r_grid.size());
  scan.map_residuals.reserve(r_grid.size());
  for (double r : r_grid) {
    const double g = sampler.radius(r) - r;
    scan.map_residuals.push_back(g);
    scan.sign_pattern.push_back(std::abs(g) <= 1e-8 ? 0 : (g > 0.0 ? 1 : -1));
  }

  int prev = 0;
  for (int s : scan.sign_pattern) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++scan.sign_changes;
    prev = s;
  }
  return scan;
}

double averaging_amplitude(int n) {
  if (n < 1) throw std::invalid_argument("averaging_amplitude: n must be >= 1");
  const double ratio = std::pow(2.0, 2 * n + 1) / binomial_double(2 * n + 2, n + 1);
  return std::pow(ratio, 1.0 / (2 * n));
}

namespace {

// Finite-difference Floquet multiplier for strongly contracting cycles.
//
// A single central difference of the return map resolves mu only while
// |P(r+h) - P(r-h)| ~ 2 h mu stays above the section map's noise floor; for
// |log mu| beyond ~20 that fails in double precision no matter the step. The
// cure is the standard renormalized product: split the period into legs
// carrying a bounded share of the divergence integral, difference the flow
// map across each leg with a fresh offset h along the unit normal, project
// the grown offset back onto the normal, and multiply the per-leg factors.
// On a closed orbit the product of the normal-projected growth factors
// equals dP/dr at the fixed point exactly.
double multiplier_renormalized_legs(const MapSampler& sampler, double r_star, double period,
                                    double h) {
  const IntegrationOptions& integ = sampler.integration;

  // divergence profile along the cycle on a uniform time grid
  const int samples = 256;
  const double dt = period / samples;
  std::vector<double> div_at(samples + 1);
  {
    AugmentedState z{r_star, 0.0, 0.0};
    div_at[0] = 0.0;
    for (int k = 1; k <= samples; ++k) {
      z = advance_with_divergence(sampler.sys, z, dt, sampler.backward, integ);
      div_at[k] = z.s;
    }
  }

  // leg boundaries: cut whenever the accumulated divergence share passes 3
  std::vector<int> cuts = {0};
  for (int k = 1; k < samples; ++k) {
    if (std::abs(div_at[k] - div_at[cuts.back()]) >= 3.0) cuts.push_back(k);
  }
  cuts.push_back(samples);

  auto field_direction = [&](const Vec2& p) {
    double fx, fy;
    sampler.sys.eval(p.x, p.y, fx, fy);
    if (sampler.backward) {
      fx = -fx;
      fy = -fy;
    }
    const double norm = std::hypot(fx, fy);
    if (norm < 1e-14) throw std::runtime_error("multiplier legs: cycle passes an equilibrium");
    return Vec2{fx / norm, fy / norm};
  };
  auto unit_normal = [&](const Vec2& p) {
    const Vec2 f = field_direction(p);
    return Vec2{-f.y, f.x};
  };

  Vec2 ref{r_star, 0.0};
  double log_mu = 0.0;
  for (std::size_t leg = 0; leg + 1 < cuts.size(); ++leg) {
    const double span = (cuts[leg + 1] - cuts[leg]) * dt;
    const Vec2 n0 = unit_normal(ref);
    const Vec2 pert{ref.x + h * n0.x, ref.y + h * n0.y};
    const Vec2 ref_next = advance(sampler.sys, ref, span, sampler.backward, integ);
    const Vec2 pert_next = advance(sampler.sys, pert, span, sampler.backward, integ);
    const Vec2 n1 = unit_normal(ref_next);
    const double grown =
        ((pert_next.x - ref_next.x) * n1.x + (pert_next.y - ref_next.y) * n1.y) / h;
    if (!(grown > 0.0)) {
      throw std::runtime_error("multiplier legs: non-positive normal growth factor");
    }
    log_mu += std::log(grown);
    ref = ref_next;
  }
  return std::exp(log_mu);
}

}  // namespace

LimitCycleRecord find_cycle(const RayleighParams& params, SystemForm form,
                            std::optional<std::pair<double, double>> bracket,
                            const CycleOptions& opts) {
  const double a = params.a_value();
  if (a == 0.0) {
    throw NoCycleFound("no cycle found: a = 0 is the linear center");
  }

  const bool backward = map_needs_backward_time(params, form);
  const MapSampler sampler(params, form, backward, opts.integration);
  auto g = [&](double r) { return sampler.radius(r) - r; };

  // Bracket a sign change of P(r) - r. In the sampling direction the origin
  // repels and infinity repels, so g > 0 inside the cycle and g < 0 outside.
  double lo, hi;
  if (bracket.has_value()) {
    lo = bracket->first;
    hi = bracket->second;
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("find_cycle: bad bracket");
  } else if (std::abs(a) < 0.1) {
    const double guess = averaging_amplitude(params.n);
    lo = 0.5 * guess;
    hi = 1.5 * guess;
  } else {
    lo = 0.1;
    hi = 10.0;
  }

  double glo = g(lo);
  double ghi = g(hi);
  while (glo * ghi > 0.0) {
    bool grew = false;
    if (lo > 1e-3) {
      lo *= 0.5;
      glo = g(lo);
      grew = true;
    }
    if (glo * ghi > 0.0 && hi < 50.0) {
      hi *= 1.5;
      ghi = g(hi);
      grew = true;
    }
    if (!grew) {
      throw NoCycleFound("no cycle found: no sign change of P(r) - r in the expanded bracket");
    }
  }

  // bisection to width 1e-6
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double gmid = g(mid);
    if (gmid == 0.0) {
      lo = hi = mid;
      glo = ghi = 0.0;
      break;
    }
    if ((gmid > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gmid;
    } else {
      hi = mid;
      ghi = gmid;
    }
  }

  // secant polish on the residual
  double r0 = lo, r1 = hi, g0 = glo, g1 = ghi;
  double best_r = std::abs(g0) < std::abs(g1) ? r0 : r1;
  double best_g = std::min(std::abs(g0), std::abs(g1));
  for (int it = 0; it < 40 && best_g > 1e-9; ++it) {
    if (g1 == g0) break;
    const double r2 = r1 - g1 * (r1 - r0) / (g1 - g0);
    if (!std::isfinite(r2) || r2 <= 0.0) break;
    const double g2 = g(r2);
    r0 = r1;
    g0 = g1;
    r1 = r2;
    g1 = g2;
    if (std::abs(g2) < best_g) {
      best_g = std::abs(g2);
      best_r = r2;
    }
    if (std::abs(r1 - r0) < 1e-13 * std::max(1.0, r1)) break;
  }
  const double r_star = best_r;

  // divergence-integral route along the located cycle
  const ReturnResult cycle = sampler.full(r_star, /*divergence=*/true);
  const double mu_div = std::exp(cycle.div_integral);

  // finite-difference route: a plain central difference while the map
  // variation is resolvable, the renormalized leg product otherwise
  const double h = std::max(1e-5 * r_star, 1e-6);
  const bool plain_fd_resolvable = std::abs(cycle.div_integral) <= 6.0;
  double mu_fd;
  if (plain_fd_resolvable) {
    mu_fd = (sampler.radius(r_star + h) - sampler.radius(r_star - h)) / (2.0 * h);
  } else {
    mu_fd = multiplier_renormalized_legs(sampler, r_star, cycle.event.t, h);
  }

  LimitCycleRecord record;
  record.multiplier_method = plain_fd_resolvable ? "central-difference" : "renormalized-legs";
  record.measured_backward = backward;
  record.r_star = r_star;
  record.period = cycle.event.t;
  record.residual = std::abs(cycle.event.state.x - r_star);
  record.amp_x = r_star;
  record.amp_y = cycle.max_abs_y;
  record.multiplier = backward ? 1.0 / mu_fd : mu_fd;
  record.div_exponent = backward ? -cycle.div_integral : cycle.div_integral;
  record.multiplier_check_ok = std::abs(mu_fd - mu_div) <= 0.05 * std::abs(mu_div);
  if (!(record.multiplier > 0.0)) {
    throw std::runtime_error("find_cycle: measured multiplier is not positive");
  }
  if (record.residual > 1e-8) {
    throw std::runtime_error("find_cycle: fixed-point residual failed to reach 1e-8");
  }
  record.stability =
      record.multiplier < 1.0 ? CycleStability::Stable : CycleStability::Unstable;
  return record;
}

std::vector<TrajectoryState> cycle_polyline(const RayleighParams& params, SystemForm form,
                                            const LimitCycleRecord& record,
                                            const CycleOptions& opts) {
  const MapSampler sampler(params, form, record.measured_backward, opts.integration);
  const double dt = record.period / 512.0;
  ReturnResult run = sampler.full(record.r_star, false, /*record=*/true, dt);
  if (record.measured_backward) {
    // present the polyline in forward time
    std::reverse(run.path.begin(), run.path.end());
    for (auto& s : run.path) s.t = record.period - s.t;
  }
  return run.path;
}

}  // namespace rayleigh
