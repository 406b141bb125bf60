#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayleigh/flow.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rayleigh;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("the linear center closes after one period") {
  const PlanarPolySystem sys = rayleigh_system(RayleighParams(0.0, 1));
  const Trajectory traj = integrate(sys, {1.0, 0.0}, kTwoPi);
  REQUIRE(!traj.states.empty());
  const auto& last = traj.states.back();
  CHECK(std::abs(last.x - 1.0) < 1e-8);
  CHECK(std::abs(last.y) < 1e-8);
  // x^2 + y^2 is a first integral
  for (const auto& s : traj.states) {
    CHECK(std::abs(s.x * s.x + s.y * s.y - 1.0) < 1e-8);
  }
  CHECK(traj.meta.steps_accepted > 0);
  CHECK(traj.meta.rhs_evaluations > 0);
}

TEST_CASE("weak damping pumps energy near the origin") {
  // eq1 with a = 0.5: d(x^2+y^2)/dt = 2 a y^2 (1 - y^2) >= 0 while |y| < 1
  const PlanarPolySystem sys = rayleigh_system(RayleighParams(0.5, 1));
  const Trajectory traj = integrate(sys, {0.01, 0.0}, 3 * kTwoPi);
  double prev = 0.0;
  for (const auto& s : traj.states) {
    const double r = std::hypot(s.x, s.y);
    if (r >= 0.5) break;
    CHECK(r >= prev - 1e-12);
    prev = r;
  }
  CHECK(prev > 0.011);  // it actually grew
}

TEST_CASE("first return on the positive x-axis") {
  const PlanarPolySystem center = rayleigh_system(RayleighParams(0.0, 1));
  for (double r : {0.1, 1.0, 10.0}) {
    const SectionEvent event = first_return(center, r);
    CHECK(std::abs(event.state.x - r) < 1e-9);
    CHECK(std::abs(event.t - kTwoPi) < 1e-9);
    CHECK(std::abs(event.state.y) <= 1e-12);
    CHECK(event.state.x > 0.0);
    CHECK(event.crossing_direction == -1);  // y' = -x < 0 on the section
  }

  // eq2, a = -0.1: origin repels (unstable focus), infinity repels
  const PlanarPolySystem sys = lienard_form(RayleighParams(-0.1, 1));
  CHECK(first_return(sys, 0.1).state.x > 0.1);
  CHECK(first_return(sys, 3.0).state.x < 3.0);
}

TEST_CASE("time-reversal symmetry of the integrator") {
  // a < 0 keeps forward eq2 orbits bounded (cycle attracts, infinity repels)
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> a_dist(-1.0, -0.1);
  std::uniform_real_distribution<double> coord(-1.2, 1.2);
  std::uniform_int_distribution<int> n_dist(1, 2);
  IntegrationOptions tight;  // the backward leg re-expands forward contraction
  tight.rtol = 1e-12;
  tight.atol = 1e-13;
  for (int k = 0; k < 20; ++k) {
    const RayleighParams params(a_dist(rng), n_dist(rng));
    const PlanarPolySystem sys = lienard_form(params);
    const PlanarPolySystem reversed = reverse_time(sys);
    const Vec2 x0{coord(rng), coord(rng)};
    const Trajectory fwd = integrate(sys, x0, 3.0, tight);
    const auto& mid = fwd.states.back();
    const Trajectory back = integrate(reversed, {mid.x, mid.y}, 3.0, tight);
    CHECK(std::abs(back.states.back().x - x0.x) < 1e-7);
    CHECK(std::abs(back.states.back().y - x0.y) < 1e-7);
  }
}

TEST_CASE("tolerance refinement converges within the reported estimate") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> a_dist(-1.5, -0.1);  // forward map defined everywhere
  std::uniform_real_distribution<double> r_dist(0.1, 4.0);
  std::uniform_int_distribution<int> n_dist(1, 3);
  for (int k = 0; k < 20; ++k) {
    const RayleighParams params(a_dist(rng), n_dist(rng));
    const CompiledSystem sys(lienard_form(params));
    const double r = r_dist(rng);

    ReturnOptions fine, base, coarse;
    base.integration.rtol = 1e-9;
    base.integration.atol = 1e-11;
    fine.integration.rtol = 1e-10;
    fine.integration.atol = 1e-12;
    coarse.integration.rtol = 1e-8;
    coarse.integration.atol = 1e-10;

    const double r_base = section_return(sys, r, base).event.state.x;
    const double r_fine = section_return(sys, r, fine).event.state.x;
    const double err_est = std::abs(section_return(sys, r, coarse).event.state.x - r_base);
    CHECK(std::abs(r_fine - r_base) < 10.0 * err_est + 1e-12);
  }
}

TEST_CASE("escape to infinity is detected and reported") {
  // eq2 with a > 0: orbits starting outside the cycle blow up in finite time
  const PlanarPolySystem sys = lienard_form(RayleighParams(1.0, 1));
  try {
    (void)first_return(sys, 5.0);
    FAIL("expected FlowError");
  } catch (const FlowError& e) {
    CHECK(e.kind == FlowError::Kind::Escape);
    CHECK(std::isfinite(e.t_last));
    CHECK(std::hypot(e.state_last.x, e.state_last.y) > 1e5);
  }
}

TEST_CASE("input validation") {
  const PlanarPolySystem sys = lienard_form(RayleighParams(1.0, 1));
  IntegrationOptions loose;
  loose.rtol = 1e-2;  // outside [1e-13, 1e-3]
  CHECK_THROWS_AS(integrate(sys, {1.0, 0.0}, 1.0, loose), std::invalid_argument);
  CHECK_THROWS_AS(integrate(sys, {1.0, 0.0}, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(integrate(sys, {std::nan(""), 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(first_return(sys, -1.0), std::invalid_argument);
}

TEST_CASE("trajectory times are monotone in the run direction") {
  const PlanarPolySystem sys = lienard_form(RayleighParams(-0.5, 1));
  const Trajectory fwd = integrate(sys, {1.0, 0.0}, 5.0);
  for (std::size_t k = 1; k < fwd.states.size(); ++k) {
    CHECK(fwd.states[k].t > fwd.states[k - 1].t);
  }
  const Trajectory back = integrate(sys, {1.0, 0.0}, -5.0);
  for (std::size_t k = 1; k < back.states.size(); ++k) {
    CHECK(back.states[k].t < back.states[k - 1].t);
  }
  CHECK(back.states.back().t == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("fixed-time advance agrees with trajectory integration") {
  const PlanarPolySystem sys = lienard_form(RayleighParams(0.8, 2));
  const CompiledSystem compiled(sys);
  const Trajectory traj = integrate(sys, {0.4, -0.2}, 2.5);
  const Vec2 hop = advance(compiled, {0.4, -0.2}, 2.5, false);
  CHECK(std::abs(hop.x - traj.states.back().x) < 1e-9);
  CHECK(std::abs(hop.y - traj.states.back().y) < 1e-9);

  // backward advance undoes the forward one
  const Vec2 round = advance(compiled, hop, 2.5, true);
  CHECK(std::abs(round.x - 0.4) < 1e-8);
  CHECK(std::abs(round.y + 0.2) < 1e-8);
}

TEST_CASE("divergence accumulates along the flow") {
  // linear center: divergence is identically zero
  const CompiledSystem center(rayleigh_system(RayleighParams(0.0, 1)));
  const AugmentedState z = advance_with_divergence(center, {1.0, 0.0, 0.0}, kTwoPi, false);
  CHECK(std::abs(z.s) < 1e-10);

  // eq2: div = -a + a(2n+1) x^{2n}; starting at the origin-side it is -a-ish
  const CompiledSystem damped(lienard_form(RayleighParams(0.5, 1)));
  ReturnOptions opts;
  opts.accumulate_divergence = true;
  const ReturnResult res = section_return(damped, 0.05, opts);
  CHECK(res.div_integral < 0.0);  // near the origin div ~ -a = -0.5
}

TEST_CASE("section return records the path when asked") {
  const CompiledSystem sys(lienard_form(RayleighParams(-0.5, 1)));
  ReturnOptions opts;
  opts.record_path = true;
  opts.record_dt = 0.05;
  const ReturnResult res = section_return(sys, 1.0, opts);
  CHECK(res.path.size() > 50);
  CHECK(res.path.front().t == 0.0);
  CHECK(std::abs(res.path.back().t - res.event.t) < 1e-12);
  CHECK(res.max_abs_y > 0.5);
}
