#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayleigh/flow.hpp"
#include "rayleigh/localanalysis.hpp"

#include <cmath>
#include <random>

using namespace rayleigh;

namespace {

PlanarPolySystem expected_eq2000(const Rational& a, int n) {
  const Rational m(2 * n + 1);
  return PlanarPolySystem::make(
      {{1, 0, m}, {2, 0, a * m}, {2, 2 * n, -(a * m)}, {3, 4 * n, Rational(1)}},
      {{0, 1, Rational(-1)}, {1, 1, -a}, {1, 2 * n + 1, a}});
}

BlowUpSystem family_cascade(const Rational& a, int n, BlowUpSystem* vertical_out = nullptr) {
  const ChartSystem u2 = chart_system(lienard_form(RayleighParams(a, n)), ChartId::U2);
  BlowUpSystem vertical = blowup_vertical(u2, n);
  if (vertical_out != nullptr) *vertical_out = vertical;
  return blowup_weighted(vertical, n);
}

}  // namespace

TEST_CASE("nondegenerate classification dictionary") {
  CHECK(classify_nondegenerate({-3, 1, -1, 0}) == EquilibriumKind::StableNode);
  CHECK(classify_nondegenerate({-1, 1, -1, 0}) == EquilibriumKind::StableFocus);
  CHECK(classify_nondegenerate({0, 1, -1, 0}) == EquilibriumKind::CenterOrWeakFocus);
  CHECK(classify_nondegenerate({1, 0, 0, -1}) == EquilibriumKind::Saddle);
  CHECK(classify_nondegenerate({1, 0, 0, 2}) == EquilibriumKind::UnstableNode);
  // boundary gamma^2 = 4 delta, gamma != 0: reported as a node
  CHECK(classify_nondegenerate({-2, 1, -1, 0}) == EquilibriumKind::StableNode);
  CHECK(classify_nondegenerate({2, 1, -1, 0}) == EquilibriumKind::UnstableNode);
  CHECK_THROWS_AS(classify_nondegenerate({1, 1, 1, 1}), std::domain_error);   // delta = 0
  CHECK_THROWS_AS(classify_nondegenerate({0, 0, 0, 0}), std::domain_error);
}

TEST_CASE("classification is invariant under similarity transforms") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  const Mat2 hyperbolic[] = {
      {2, 0, 0, -1},   // saddle
      {-3, 1, -1, 0},  // stable node
      {-1, 1, -1, 0},  // stable focus
      {1, 1, -1, 1},   // unstable focus
  };
  int done = 0;
  while (done < 100) {
    const double p = entry(rng), q = entry(rng), r = entry(rng), s = entry(rng);
    const double det = p * s - q * r;
    if (std::abs(det) < 0.3) continue;
    for (const Mat2& j : hyperbolic) {
      // M J M^{-1}
      const double i00 = s / det, i01 = -q / det, i10 = -r / det, i11 = p / det;
      const double t00 = p * j.m00 + q * j.m10, t01 = p * j.m01 + q * j.m11;
      const double t10 = r * j.m00 + s * j.m10, t11 = r * j.m01 + s * j.m11;
      const Mat2 conj{t00 * i00 + t01 * i10, t00 * i01 + t01 * i11,
                      t10 * i00 + t11 * i10, t10 * i01 + t11 * i11};
      CHECK(classify_nondegenerate(conj) == classify_nondegenerate(j));
    }
    ++done;
  }

  // the center row needs exact arithmetic to keep gamma at 0: use unimodular
  // integer similarities
  const int unimodular[][4] = {{1, 1, 0, 1}, {2, 1, 1, 1}, {1, 0, 3, 1}, {5, 2, 2, 1}};
  for (const auto& m : unimodular) {
    const double p = m[0], q = m[1], r = m[2], s = m[3];
    const double det = p * s - q * r;
    const Mat2 j{0, 1, -1, 0};
    const double i00 = s / det, i01 = -q / det, i10 = -r / det, i11 = p / det;
    const double t00 = p * j.m00 + q * j.m10, t01 = p * j.m01 + q * j.m11;
    const double t10 = r * j.m00 + s * j.m10, t11 = r * j.m01 + s * j.m11;
    const Mat2 conj{t00 * i00 + t01 * i10, t00 * i01 + t01 * i11, t10 * i00 + t11 * i10,
                    t10 * i01 + t11 * i11};
    CHECK(classify_nondegenerate(conj) == EquilibriumKind::CenterOrWeakFocus);
  }
}

TEST_CASE("origin classification reproduces the finite-point table") {
  struct Row {
    double a;
    EquilibriumKind kind;
  };
  const Row table[] = {
      {-3.0, EquilibriumKind::UnstableNode}, {-2.0, EquilibriumKind::UnstableNode},
      {-1.0, EquilibriumKind::UnstableFocus}, {-0.5, EquilibriumKind::UnstableFocus},
      {0.0, EquilibriumKind::CenterOrWeakFocus}, {0.5, EquilibriumKind::StableFocus},
      {1.0, EquilibriumKind::StableFocus}, {2.0, EquilibriumKind::StableNode},
      {3.0, EquilibriumKind::StableNode},
  };
  for (const Row& row : table) {
    for (int n : {1, 2, 3}) {
      const auto report = classify_origin_finite(RayleighParams(row.a, n), SystemForm::Eq2);
      CHECK(report.kind == row.kind);
      CHECK(report.delta == 1.0);
      CHECK(report.gamma == -row.a);
      // eq1 is the time-reversed picture
      const auto mirrored = classify_origin_finite(RayleighParams(row.a, n), SystemForm::Eq1);
      CHECK(mirrored.kind == time_reversed(row.kind));
    }
  }
  const auto center = classify_origin_finite(RayleighParams(0.0, 5), SystemForm::Eq2);
  CHECK(center.kind == EquilibriumKind::CenterOrWeakFocus);
  CHECK(center.note.find("center") != std::string::npos);
}

TEST_CASE("eq1 origin instability is visible in the flow") {
  // (a=1, n=1, eq1): trace +a, so small orbits spiral outward
  const auto report = classify_origin_finite(RayleighParams(1.0, 1), SystemForm::Eq1);
  CHECK(report.kind == EquilibriumKind::UnstableFocus);
  const auto event = first_return(rayleigh_system(RayleighParams(1.0, 1)), 0.01);
  CHECK(event.state.x > 0.01);
}

TEST_CASE("semi-hyperbolic classification by the leading term of g") {
  // x' = -x^2, y' = y: f = 0, g = -x^2 -> saddle-node
  {
    const PlanarPolySystem local =
        PlanarPolySystem::make({{2, 0, Rational(-1)}}, {{0, 1, Rational(1)}});
    const auto [data, kind] = classify_semihyperbolic(local, Rational(1));
    CHECK(kind == EquilibriumKind::SaddleNode);
    CHECK(data.alpha == 2);
    CHECK(data.lead == -1.0);
    CHECK(data.side_data.find("positive x-axis") != std::string::npos);
  }
  // x' = x^3, y' = y: alpha odd, lead > 0 -> unstable node
  {
    const PlanarPolySystem local =
        PlanarPolySystem::make({{3, 0, Rational(1)}}, {{0, 1, Rational(1)}});
    const auto [data, kind] = classify_semihyperbolic(local, Rational(1));
    CHECK(kind == EquilibriumKind::SemiHyperbolicUnstableNode);
    CHECK(data.alpha == 3);
    CHECK(data.lead == 1.0);
  }
  // negative lambda is accepted but flagged
  {
    const PlanarPolySystem local =
        PlanarPolySystem::make({{3, 0, Rational(1)}}, {{0, 1, Rational(-1)}});
    const auto [data, kind] = classify_semihyperbolic(local, Rational(-1));
    CHECK(data.side_data.find("lambda < 0") != std::string::npos);
    CHECK(kind == EquilibriumKind::SemiHyperbolicUnstableNode);
  }
  // normal-form violations are rejected
  const PlanarPolySystem bad_a =
      PlanarPolySystem::make({{1, 0, Rational(1)}}, {{0, 1, Rational(1)}});
  CHECK_THROWS_AS(classify_semihyperbolic(bad_a, Rational(1)), std::invalid_argument);
  const PlanarPolySystem bad_b =
      PlanarPolySystem::make({{2, 0, Rational(1)}}, {{1, 0, Rational(1)}, {0, 1, Rational(1)}});
  CHECK_THROWS_AS(classify_semihyperbolic(bad_b, Rational(1)), std::invalid_argument);
}

TEST_CASE("vertical blow-up of the family's U2 origin") {
  const ChartSystem u2 = chart_system(lienard_form(RayleighParams(1.0, 1)), ChartId::U2);
  const BlowUpSystem bs = blowup_vertical(u2, 1);
  // x' = x^2 + x z^2 (1 - x + x^2), z' = -z (x + z^2 - x z^2)
  const PlanarPolySystem expected = PlanarPolySystem::make(
      {{2, 0, Rational(1)}, {1, 2, Rational(1)}, {2, 2, Rational(-1)}, {3, 2, Rational(1)}},
      {{1, 1, Rational(-1)}, {0, 3, Rational(-1)}, {1, 3, Rational(1)}});
  CHECK(bs.system == expected);
  CHECK(bs.cancelled_power == 1);
  CHECK(bs.transform == BlowUpTransform::Vertical);

  const ChartSystem deep = chart_system(lienard_form(RayleighParams(-1.0, 2)), ChartId::U2);
  CHECK(blowup_vertical(deep, 2).cancelled_power == 3);

  // no common factor: reject
  const PlanarPolySystem affine =
      PlanarPolySystem::make({{0, 0, Rational(1)}, {1, 0, Rational(1)}}, {{0, 1, Rational(1)}});
  const ChartSystem u3 = chart_system(affine, ChartId::U3);
  CHECK_THROWS_AS(blowup_vertical(u3, 1), std::domain_error);
}

TEST_CASE("weighted blow-up reaches the final desingularized system") {
  for (int n : {1, 2, 3}) {
    for (const Rational& a : {Rational(1), Rational(-2), Rational(5, 7)}) {
      const BlowUpSystem ws = family_cascade(a, n);
      CHECK(ws.system == expected_eq2000(a, n));
      CHECK(ws.cancelled_power == 2 * n);

      // fixed points on the divisor: (0, 0) and (-1/a, 0)
      const auto roots = real_roots(restrict_y0(ws.system.P));
      REQUIRE(roots.size() == 2);
      const double inv = to_double(Rational(-1) / a);
      CHECK(std::min(roots[0].value, roots[1].value) == std::min(0.0, inv));
      CHECK(std::max(roots[0].value, roots[1].value) == std::max(0.0, inv));

      const Mat2 j0 = jacobian(ws.system, 0.0, 0.0);
      CHECK(j0.m00 == 2.0 * n + 1.0);
      CHECK(j0.m11 == -1.0);
      CHECK(classify_nondegenerate(j0) == EquilibriumKind::Saddle);

      const Mat2 j1 = jacobian(ws.system, inv, 0.0);
      CHECK(j1.m00 == doctest::Approx(-(2.0 * n + 1.0)).epsilon(1e-14));
      CHECK(std::abs(j1.m11) < 1e-14);
    }
  }
}

TEST_CASE("blow-up pullback identities") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coord(0.05, 0.8);
  for (const Rational& a : {Rational(1), Rational(-1)}) {
    for (int n : {1, 2}) {
      const ChartSystem u2 = chart_system(lienard_form(RayleighParams(a, n)), ChartId::U2);
      BlowUpSystem vertical;
      const BlowUpSystem weighted = family_cascade(a, n, &vertical);

      // vertical: (x, z) -> (u, v) = (x, z x); multiply back x^{2n-1}
      auto check_vertical = [&](double x, double z, double tol) {
        const Vec2 f = evaluate(vertical.system, x, z);
        const double mult = std::pow(x, 2 * n - 1);
        const double du = f.x * mult;
        const double dv = (f.y * x + z * f.x) * mult;
        const double ref_u = evaluate(u2.du, x, z * x);
        const double ref_v = evaluate(u2.dv, x, z * x);
        const double scale = std::max({1.0, std::abs(ref_u), std::abs(ref_v)});
        CHECK(std::abs(du - ref_u) / scale < tol);
        CHECK(std::abs(dv - ref_v) / scale < tol);
      };
      check_vertical(0.3, 0.2, 1e-10);
      for (int k = 0; k < 50; ++k) check_vertical(coord(rng), coord(rng), 1e-9);

      // weighted: (r, w) -> (x, z) = (w^{2n} r, w); multiply back w^{2n}
      auto check_weighted = [&](double r, double w, double tol) {
        const Vec2 f = evaluate(weighted.system, r, w);
        const double mult = std::pow(w, 2 * n);
        const double dr = f.x * mult;
        const double dw = f.y * mult;
        const double dx = mult * dr + 2 * n * std::pow(w, 2 * n - 1) * r * dw;
        const double dz = dw;
        const double ref_x = evaluate(vertical.system.P, mult * r, w);
        const double ref_z = evaluate(vertical.system.Q, mult * r, w);
        const double scale = std::max({1.0, std::abs(ref_x), std::abs(ref_z)});
        CHECK(std::abs(dx - ref_x) / scale < tol);
        CHECK(std::abs(dz - ref_z) / scale < tol);
      };
      for (int k = 0; k < 50; ++k) check_weighted(coord(rng), coord(rng), 1e-9);
    }
  }
}

TEST_CASE("the cascade classifies the divisor fixed point at (-1/a, 0)") {
  // shifted and time-reversed, the semi-hyperbolic point has
  // g(x) = -x^{4n+1} / ((2n+1) a^2) + ...
  for (int n : {1, 2}) {
    const Rational a(-1);
    const BlowUpSystem ws = family_cascade(a, n);
    const Rational shift = Rational(-1) / a;
    PlanarPolySystem shifted = PlanarPolySystem::make(
        shift_vars(ws.system.P, shift, Rational(0)), shift_vars(ws.system.Q, shift, Rational(0)));
    shifted = reverse_time(shifted);
    const PlanarPolySystem normal =
        PlanarPolySystem::make(swap_vars(shifted.Q), swap_vars(shifted.P));
    const auto [data, kind] = classify_semihyperbolic(normal, Rational(2 * n + 1));
    CHECK(kind == EquilibriumKind::SemiHyperbolicSaddle);
    CHECK(data.alpha == 4 * n + 1);
    CHECK(data.lead == doctest::Approx(-1.0 / (2 * n + 1)).epsilon(1e-12));
  }
}

TEST_CASE("resolve_degenerate assembles the provenance chain") {
  const RayleighParams params(-1.0, 1);
  const ChartSystem u2 = chart_system(lienard_form(params), ChartId::U2);
  const EquilibriumReport report = resolve_degenerate(u2, params);
  CHECK(report.kind == EquilibriumKind::Degenerate);
  CHECK(report.note.find("two hyperbolic sectors") != std::string::npos);
  REQUIRE(report.provenance.size() == 2);
  CHECK(report.provenance[0].transform == BlowUpTransform::Vertical);
  CHECK(report.provenance[0].cancelled_power == 1);
  CHECK(report.provenance[1].transform == BlowUpTransform::Weighted);
  CHECK(report.provenance[1].cancelled_power == 2);

  const auto& subs = report.provenance[1].sub_equilibria;
  REQUIRE(subs.size() == 2);
  bool saw_saddle = false, saw_semi = false;
  for (const auto& sub : subs) {
    if (sub.kind == EquilibriumKind::Saddle) saw_saddle = true;
    if (sub.kind == EquilibriumKind::SemiHyperbolicSaddle) saw_semi = true;
  }
  CHECK(saw_saddle);
  CHECK(saw_semi);

  const RayleighParams deep(1.0, 3);
  const ChartSystem u2_deep = chart_system(lienard_form(deep), ChartId::U2);
  const EquilibriumReport resolved = resolve_degenerate(u2_deep, deep);
  REQUIRE(resolved.provenance.size() == 2);
  bool found_saddle_jac = false;
  for (const auto& sub : resolved.provenance[1].sub_equilibria) {
    if (sub.kind == EquilibriumKind::Saddle) {
      CHECK(sub.jac.m00 == 7.0);  // 1 + 2n with n = 3
      CHECK(sub.jac.m11 == -1.0);
      found_saddle_jac = true;
    }
  }
  CHECK(found_saddle_jac);

  const RayleighParams center(0.0, 1);
  const ChartSystem u2_center = chart_system(lienard_form(center), ChartId::U2);
  CHECK_THROWS_AS(resolve_degenerate(u2_center, center), std::domain_error);
}

TEST_CASE("infinite-point stubs upgrade to full reports") {
  for (double a : {1.0, -2.0}) {
    const RayleighParams params(a, 1);
    const PlanarPolySystem sys = lienard_form(params);
    for (const auto& pt : infinite_equilibria(sys)) {
      const EquilibriumReport report = classify_infinite(sys, pt, params);
      if (pt.chart == ChartId::U1 || pt.chart == ChartId::V1) {
        CHECK(report.kind ==
              (a > 0 ? EquilibriumKind::StableNode : EquilibriumKind::UnstableNode));
      } else {
        CHECK(report.kind == EquilibriumKind::Degenerate);
        CHECK(report.provenance.size() == 2);  // resolved through the cascade
      }
    }
  }
}

TEST_CASE("time reversal of kinds is an involution") {
  for (EquilibriumKind kind :
       {EquilibriumKind::Saddle, EquilibriumKind::StableNode, EquilibriumKind::UnstableNode,
        EquilibriumKind::StableFocus, EquilibriumKind::UnstableFocus,
        EquilibriumKind::CenterOrWeakFocus, EquilibriumKind::SemiHyperbolicSaddle,
        EquilibriumKind::SemiHyperbolicStableNode, EquilibriumKind::SemiHyperbolicUnstableNode,
        EquilibriumKind::SaddleNode, EquilibriumKind::Degenerate}) {
    CHECK(time_reversed(time_reversed(kind)) == kind);
  }
  CHECK(time_reversed(EquilibriumKind::StableNode) == EquilibriumKind::UnstableNode);
  CHECK(time_reversed(EquilibriumKind::Saddle) == EquilibriumKind::Saddle);
}
