#include "rayleigh/verification.hpp"

#include "rayleigh/compactification.hpp"
#include "rayleigh/lienardcheck.hpp"
#include "rayleigh/limitcycle.hpp"
#include "rayleigh/localanalysis.hpp"
#include "rayleigh/portrait.hpp"
#include "rayleigh/vectorfield.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace rayleigh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- expected
// closed forms for the family's charts and blow-ups, used for coefficient-
// exact comparison. Every coefficient below is affine in a, so agreement at
// two distinct rational values of a already implies the identity in a; the
// suite samples three.

ChartSystem expected_u1(const Rational& a, int n) {
  ChartSystem cs;
  cs.chart = ChartId::U1;
  cs.source_degree = 2 * n + 1;
  // du = -a u + v^{2n} (a u - 1 - u^2), dv = -a v + v^{2n+1} (a - u)
  cs.du = canonical({{1, 0, -a}, {1, 2 * n, a}, {0, 2 * n, Rational(-1)}, {2, 2 * n, Rational(-1)}});
  cs.dv = canonical({{0, 1, -a}, {0, 2 * n + 1, a}, {1, 2 * n + 1, Rational(-1)}});
  return cs;
}

ChartSystem expected_u2(const Rational& a, int n) {
  ChartSystem cs;
  cs.chart = ChartId::U2;
  cs.source_degree = 2 * n + 1;
  // du = a u^{2n+1} + v^{2n} (1 - a u + u^2), dv = u v^{2n+1}
  cs.du = canonical({{2 * n + 1, 0, a}, {0, 2 * n, Rational(1)}, {1, 2 * n, -a}, {2, 2 * n, Rational(1)}});
  cs.dv = canonical({{1, 2 * n + 1, Rational(1)}});
  return cs;
}

PlanarPolySystem expected_vertical(const Rational& a, int n) {
  // x' = a x^2 + x z^{2n} (1 - a x + x^2), z' = -z (a x + z^{2n} - a z^{2n} x)
  return PlanarPolySystem::make(
      {{2, 0, a}, {1, 2 * n, Rational(1)}, {2, 2 * n, -a}, {3, 2 * n, Rational(1)}},
      {{1, 1, -a}, {0, 2 * n + 1, Rational(-1)}, {1, 2 * n + 1, a}});
}

PlanarPolySystem expected_weighted(const Rational& a, int n) {
  // r' = r ((2n+1)(1 + a r) - a (2n+1) r w^{2n} + r^2 w^{4n}),
  // w' = w (-1 + a r (-1 + w^{2n})).
  // The r^2 w^{4n} term follows from composing the two substitutions; a
  // w^{2n} exponent in its place fails the pullback identity.
  const Rational m(2 * n + 1);
  return PlanarPolySystem::make(
      {{1, 0, m}, {2, 0, a * m}, {2, 2 * n, -(a * m)}, {3, 4 * n, Rational(1)}},
      {{0, 1, Rational(-1)}, {1, 1, -a}, {1, 2 * n + 1, a}});
}

// ------------------------------------------------------------- quadrature
// oracle: the mean energy production over a circular orbit of radius r,
//   E(r) = (1/2pi) Int (1 - (r sin t)^{2n}) (r sin t)^2 dt,
// via the trapezoid rule (exponentially accurate for periodic integrands).

double mean_energy(double r, int n) {
  const int N = 4096;
  double acc = 0.0;
  for (int k = 0; k < N; ++k) {
    const double s = r * std::sin(kTwoPi * k / N);
    acc += (1.0 - std::pow(s, 2 * n)) * s * s;
  }
  return acc / N;
}

double quadrature_amplitude(int n) {
  double lo = 1.0, hi = 2.0;
  if (!(mean_energy(lo, n) > 0.0) || !(mean_energy(hi, n) < 0.0)) {
    throw std::runtime_error("quadrature_amplitude: bracket assumption failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_energy(mid, n) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ------------------------------------------------------------------ misc

struct Failure {
  std::ostringstream text;
  bool any = false;

  template <class T>
  void add(const T& what) {
    if (any) text << "; ";
    text << what;
    any = true;
  }
};

std::vector<PlanarPolySystem> random_low_degree_systems(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> degree(1, 5);
  std::vector<PlanarPolySystem> out;
  while (static_cast<int>(out.size()) < count) {
    const int d = degree(rng);
    MonomialList p, q;
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; i + j <= d; ++j) {
        if (const int c = coeff(rng); c != 0 && (i + j == d || coeff(rng) > 1)) {
          p.push_back({i, j, Rational(c)});
        }
        if (const int c = coeff(rng); c != 0 && (i + j == d || coeff(rng) > 1)) {
          q.push_back({i, j, Rational(c)});
        }
      }
    }
    PlanarPolySystem sys = PlanarPolySystem::make(std::move(p), std::move(q));
    if (sys.degree == d && !restrict_y0(chart_system(sys, ChartId::U1).du).is_zero()) {
      out.push_back(std::move(sys));
    }
  }
  return out;
}

bool chart_compatibility_holds(const PlanarPolySystem& sys, unsigned seed, std::string& why) {
  const ChartSystem u1 = chart_system(sys, ChartId::U1);
  const ChartSystem u2 = chart_system(sys, ChartId::U2);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> v_dist(0.05, 1.5);

  int checked = 0;
  for (int attempt = 0; attempt < 2000 && checked < 50; ++attempt) {
    const double u = u_dist(rng);
    const double v = v_dist(rng);
    if (std::abs(u) < 0.05) continue;

    const double f1x = evaluate(u1.du, u, v);
    const double f1y = evaluate(u1.dv, u, v);
    // transition (u, v) -> (1/u, v/u); its differential applied to the field
    double gx = -f1x / (u * u);
    double gy = -v * f1x / (u * u) + f1y / u;

    double f2x = evaluate(u2.du, 1.0 / u, v / u);
    double f2y = evaluate(u2.dv, 1.0 / u, v / u);
    // for u < 0 the image point lies on the V2 side, where the U2 polynomial
    // is the field times (-1)^{d-1}
    if (u < 0.0 && orientation_factor(sys.degree) == -1) {
      f2x = -f2x;
      f2y = -f2y;
    }

    const double gnorm = std::hypot(gx, gy);
    const double fnorm = std::hypot(f2x, f2y);
    if (gnorm < 1e-9 || fnorm < 1e-9) continue;

    const double dx = gx / gnorm - f2x / fnorm;
    const double dy = gy / gnorm - f2y / fnorm;
    if (std::hypot(dx, dy) > 1e-8) {
      std::ostringstream msg;
      msg << "direction mismatch at (u,v)=(" << u << "," << v << ")";
      why = msg.str();
      return false;
    }
    ++checked;
  }
  if (checked < 50) {
    why = "could not find 50 regular sample points";
    return false;
  }
  return true;
}

struct CycleCheck {
  double a = 0.0;
  int n = 0;
  LimitCycleRecord record;
};

using Clock = std::chrono::steady_clock;

CriterionResult timed(int id, const std::string& name,
                      const std::function<void(Failure&)>& body) {
  CriterionResult result;
  result.id = id;
  result.name = name;
  const auto start = Clock::now();
  Failure failure;
  try {
    body(failure);
    result.passed = !failure.any;
    result.detail = failure.text.str();
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& opts) {
  std::vector<CriterionResult> results;
  const int jobs = opts.jobs > 0 ? opts.jobs
                                 : std::max(1u, std::thread::hardware_concurrency());
  const std::vector<int> n_full = opts.quick ? std::vector<int>{1} : std::vector<int>{1, 2, 3};
  const std::vector<Rational> a_samples = {Rational(1), Rational(2), Rational(5, 7)};

  CycleOptions cycle_opts;
  cycle_opts.integration = opts.integration;

  // 1. chart-formula reproduction (exact, symbolic in a via affine sampling)
  results.push_back(timed(1, "chart-formula reproduction", [&](Failure& fail) {
    for (int n : {1, 2, 3}) {
      for (const Rational& a : a_samples) {
        const PlanarPolySystem sys = lienard_form(RayleighParams(a, n));
        if (!(chart_system(sys, ChartId::U1) == expected_u1(a, n))) {
          fail.add("U1 mismatch at n=" + std::to_string(n));
        }
        if (!(chart_system(sys, ChartId::U2) == expected_u2(a, n))) {
          fail.add("U2 mismatch at n=" + std::to_string(n));
        }
      }
    }
  }));

  // 2. blow-up cascade reproduction (exact)
  results.push_back(timed(2, "blow-up cascade reproduction", [&](Failure& fail) {
    for (int n : {1, 2, 3}) {
      for (const Rational& a : {Rational(1), Rational(-2), Rational(3, 4)}) {
        const ChartSystem u2 = chart_system(lienard_form(RayleighParams(a, n)), ChartId::U2);
        const BlowUpSystem vertical = blowup_vertical(u2, n);
        if (!(vertical.system == expected_vertical(a, n)) ||
            vertical.cancelled_power != 2 * n - 1) {
          fail.add("vertical blow-up mismatch at n=" + std::to_string(n));
        }
        const BlowUpSystem weighted = blowup_weighted(vertical, n);
        if (!(weighted.system == expected_weighted(a, n)) || weighted.cancelled_power != 2 * n) {
          fail.add("weighted blow-up mismatch at n=" + std::to_string(n));
        }

        const auto roots = real_roots(restrict_y0(weighted.system.P));
        const double inv = to_double(Rational(-1) / a);
        if (roots.size() != 2 ||
            std::abs(std::min(roots[0].value, roots[1].value) - std::min(0.0, inv)) > 0.0 ||
            std::abs(std::max(roots[0].value, roots[1].value) - std::max(0.0, inv)) > 0.0) {
          fail.add("fixed points of the weighted system wrong at n=" + std::to_string(n));
        }
        const Mat2 j0 = jacobian(weighted.system, 0.0, 0.0);
        const Mat2 j1 = jacobian(weighted.system, inv, 0.0);
        const double m = 2.0 * n + 1.0;
        if (j0.m00 != m || j0.m11 != -1.0 || j0.m01 != 0.0 || j0.m10 != 0.0) {
          fail.add("Jacobian at (0,0) wrong");
        }
        if (std::abs(j1.m00 + m) > 1e-12 || std::abs(j1.m11) > 1e-12 || j1.m01 != 0.0) {
          fail.add("Jacobian at (-1/a,0) wrong");
        }
      }
    }
  }));

  // 3. finite classification table
  results.push_back(timed(3, "finite classification table", [&](Failure& fail) {
    const double as[] = {-3, -2, -1, -0.5, 0, 0.5, 1, 2, 3};
    int correct = 0;
    for (double a : as) {
      for (int n : {1, 2, 3}) {
        const EquilibriumKind expected =
            a >= 2.0    ? EquilibriumKind::StableNode
            : a <= -2.0 ? EquilibriumKind::UnstableNode
            : a < 0.0   ? EquilibriumKind::UnstableFocus
            : a > 0.0   ? EquilibriumKind::StableFocus
                        : EquilibriumKind::CenterOrWeakFocus;
        const auto report = classify_origin_finite(RayleighParams(a, n), SystemForm::Eq2);
        if (report.kind == expected) {
          ++correct;
        } else {
          fail.add("a=" + std::to_string(a) + " n=" + std::to_string(n) + " got " +
                   to_string(report.kind));
        }
      }
    }
    if (correct != 27) fail.add(std::to_string(correct) + "/27 correct");
  }));

  // 4. linear-center identity
  results.push_back(timed(4, "linear-center identity", [&](Failure& fail) {
    const CompiledSystem sys(lienard_form(RayleighParams(0.0, 1)));
    ReturnOptions ropts;
    ropts.integration = opts.integration;
    for (double r : {0.1, 1.0, 5.0}) {
      const ReturnResult res = section_return(sys, r, ropts);
      if (std::abs(res.event.state.x - r) > 1e-8) {
        fail.add("|P(r)-r| too large at r=" + std::to_string(r));
      }
      if (std::abs(res.event.t - kTwoPi) > 1e-8) {
        fail.add("period error too large at r=" + std::to_string(r));
      }
    }
  }));

  // 5. existence and uniqueness scan (+ cycles stashed for criterion 7)
  std::vector<CycleCheck> cycles;
  results.push_back(timed(5, "existence and uniqueness scan", [&](Failure& fail) {
    const std::vector<double> grid = default_scan_grid(100, 0.05, 10.0);
    std::vector<std::pair<double, int>> combos;
    for (double mag : {0.25, 0.5, 1.0, 2.0}) {
      for (int sign : {-1, 1}) {
        for (int n : n_full) combos.emplace_back(sign * mag, n);
      }
    }
    cycles.resize(combos.size());
    std::vector<std::string> problems(combos.size());
    detail::parallel_for(static_cast<int>(combos.size()), jobs, [&](int k) {
      const auto [a, n] = combos[k];
      const RayleighParams params(a, n);
      const UniquenessScan scan =
          uniqueness_scan(params, SystemForm::Eq2, grid, cycle_opts);
      if (scan.sign_changes != 1) {
        problems[k] = "sign changes = " + std::to_string(scan.sign_changes) + " at a=" +
                      std::to_string(a) + " n=" + std::to_string(n);
        return;
      }
      cycles[k] = {a, n, find_cycle(params, SystemForm::Eq2, std::nullopt, cycle_opts)};
    });
    for (const auto& p : problems) {
      if (!p.empty()) fail.add(p);
    }
  }));

  // 6. averaging-limit amplitude
  results.push_back(timed(6, "averaging-limit amplitude", [&](Failure& fail) {
    for (int n = 1; n <= 8; ++n) {
      const double closed = averaging_amplitude(n);
      const double quad = quadrature_amplitude(n);
      if (std::abs(closed - quad) > 1e-10) {
        fail.add("closed form differs from quadrature at n=" + std::to_string(n));
      }
    }
    const std::vector<int> ns = opts.quick ? std::vector<int>{1} : std::vector<int>{1, 2};
    std::vector<std::string> problems(ns.size() * 2);
    std::vector<std::pair<double, int>> combos;
    for (int n : ns) {
      combos.emplace_back(-0.01, n);
      combos.emplace_back(0.01, n);
    }
    detail::parallel_for(static_cast<int>(combos.size()), jobs, [&](int k) {
      const auto [a, n] = combos[k];
      const double reference = averaging_amplitude(n);
      const auto record = find_cycle(RayleighParams(a, n), SystemForm::Eq2, std::nullopt,
                                     cycle_opts);
      if (std::abs(record.r_star - reference) > 0.02 * reference) {
        problems[k] = "r_star off the averaging limit at a=" + std::to_string(a) +
                      " n=" + std::to_string(n);
      }
    });
    for (const auto& p : problems) {
      if (!p.empty()) fail.add(p);
    }
  }));

  // 7. stability consistency (from the cycles collected in criterion 5)
  results.push_back(timed(7, "stability consistency", [&](Failure& fail) {
    if (cycles.empty()) {
      fail.add("no cycles collected (criterion 5 failed earlier?)");
      return;
    }
    for (const auto& check : cycles) {
      if (check.n == 0) continue;  // slot skipped due to an earlier failure
      if (!check.record.multiplier_check_ok) {
        fail.add("finite-difference vs divergence-integral multiplier disagree at a=" +
                 std::to_string(check.a));
      }
      const bool expect_stable = check.a < 0.0;  // trapping-region side for eq2
      const bool is_stable = check.record.multiplier < 1.0;
      if (expect_stable != is_stable) {
        fail.add("multiplier side contradicts the trapping region at a=" +
                 std::to_string(check.a));
      }
    }
    if (!fail.any) {
      fail.text << "measured convention: stable iff a < 0 for eq2 (equivalently a > 0 for eq1)";
    }
  }));

  // 8. Lienard hypothesis check
  results.push_back(timed(8, "Lienard hypothesis check", [&](Failure& fail) {
    for (double mag : {0.5, 1.0, 2.0}) {
      for (int n : n_full) {
        const RayleighParams pos(mag, n);
        const auto direct = check_hypotheses(build_lienard_data(pos), pos);
        if (direct.verdict != UniquenessVerdict::AtMostOneStable) {
          fail.add("direct verdict wrong at a=" + std::to_string(mag));
        }
        const RayleighParams neg(-mag, n);
        const auto mirrored = check_hypotheses(build_lienard_data(neg), neg);
        if (mirrored.verdict != UniquenessVerdict::AtMostOneStableViaEquivalence) {
          fail.add("equivalence verdict wrong at a=" + std::to_string(-mag));
        }
      }
    }
    const RayleighParams zero(0.0, 1);
    if (check_hypotheses(build_lienard_data(zero), zero).verdict !=
        UniquenessVerdict::NotApplicable) {
      fail.add("a=0 should report not-applicable");
    }
  }));

  // 9. portrait classes
  results.push_back(timed(9, "portrait classes", [&](Failure& fail) {
    const std::vector<int> ns = opts.quick ? std::vector<int>{1} : std::vector<int>{1, 3};
    std::vector<std::pair<double, int>> grid;
    for (double a : {-1.0, -0.3, 0.0, 0.5, 2.0}) {
      for (int n : ns) grid.emplace_back(a, n);
    }
    std::vector<PortraitModel> models(grid.size());
    std::vector<std::string> problems(grid.size());
    detail::parallel_for(static_cast<int>(grid.size()), jobs, [&](int k) {
      const auto [a, n] = grid[k];
      models[k] = build_portrait(RayleighParams(a, n), SystemForm::Eq2);
      const std::string svg = render_svg(models[k], 640);
      if (svg.find("class=\"boundary\"") == std::string::npos) {
        problems[k] = "render missing boundary circle";
      }
    });
    for (const auto& p : problems) {
      if (!p.empty()) fail.add(p);
    }

    std::vector<PortraitClass> tags;
    for (const auto& m : models) {
      if (std::find(tags.begin(), tags.end(), m.class_tag) == tags.end()) {
        tags.push_back(m.class_tag);
      }
    }
    if (tags.size() != 3) {
      fail.add("expected exactly 3 classes, found " + std::to_string(tags.size()));
    }
    for (std::size_t p = 0; p < models.size(); ++p) {
      for (std::size_t q = 0; q < models.size(); ++q) {
        const bool same_sign = (grid[p].first < 0) == (grid[q].first < 0) &&
                               (grid[p].first == 0) == (grid[q].first == 0);
        const bool equivalent =
            topological_class(models[p], models[q]) == Equivalence::Equivalent;
        if (same_sign != equivalent) {
          fail.add("partition does not split by sign(a)");
        }
      }
    }
  }));

  // 10. equator invariance and chart compatibility
  results.push_back(timed(10, "equator invariance and chart compatibility", [&](Failure& fail) {
    std::vector<PlanarPolySystem> systems;
    for (double a : {1.0, -2.0, 0.0}) {
      for (int n : {1, 2}) systems.push_back(lienard_form(RayleighParams(a, n)));
    }
    for (auto& sys : random_low_degree_systems(10, 20240817u)) systems.push_back(std::move(sys));

    unsigned seed = 7u;
    for (const auto& sys : systems) {
      for (ChartId chart : {ChartId::U1, ChartId::U2, ChartId::V1, ChartId::V2}) {
        for (const auto& m : chart_system(sys, chart).dv) {
          if (m.j < 1) fail.add("dv not divisible by v in chart " + to_string(chart));
        }
      }
      std::string why;
      if (!chart_compatibility_holds(sys, seed++, why)) {
        fail.add("chart compatibility: " + why);
      }
    }
  }));

  return results;
}

}  // namespace rayleigh
