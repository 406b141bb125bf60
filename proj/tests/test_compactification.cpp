#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayleigh/compactification.hpp"

#include <cmath>
#include <random>

using namespace rayleigh;

namespace {

// closed forms of the family's compactified charts; every coefficient is
// affine in a, so structural equality at two rational a values settles the
// identity for symbolic a (three are sampled)
ChartSystem family_u1(const Rational& a, int n) {
  ChartSystem cs;
  cs.chart = ChartId::U1;
  cs.source_degree = 2 * n + 1;
  cs.du = canonical(
      {{1, 0, -a}, {1, 2 * n, a}, {0, 2 * n, Rational(-1)}, {2, 2 * n, Rational(-1)}});
  cs.dv = canonical({{0, 1, -a}, {0, 2 * n + 1, a}, {1, 2 * n + 1, Rational(-1)}});
  return cs;
}

ChartSystem family_u2(const Rational& a, int n) {
  ChartSystem cs;
  cs.chart = ChartId::U2;
  cs.source_degree = 2 * n + 1;
  cs.du = canonical(
      {{2 * n + 1, 0, a}, {0, 2 * n, Rational(1)}, {1, 2 * n, -a}, {2, 2 * n, Rational(1)}});
  cs.dv = canonical({{1, 2 * n + 1, Rational(1)}});
  return cs;
}

PlanarPolySystem squares_system() {  // degree 2, exercises the V-side factor
  return PlanarPolySystem::make({{2, 0, Rational(1)}}, {{0, 2, Rational(1)}});
}

}  // namespace

TEST_CASE("U1 and U2 charts of the Lienard form match the closed forms") {
  for (int n : {1, 2, 3}) {
    for (const Rational& a : {Rational(1), Rational(2), Rational(5, 7)}) {
      const PlanarPolySystem sys = lienard_form(RayleighParams(a, n));
      CHECK(chart_system(sys, ChartId::U1) == family_u1(a, n));
      CHECK(chart_system(sys, ChartId::U2) == family_u2(a, n));
    }
  }
}

TEST_CASE("U1 chart of the linear center") {
  const PlanarPolySystem sys = rayleigh_system(RayleighParams(0.0, 1));
  const ChartSystem u1 = chart_system(sys, ChartId::U1);
  // du = -1 - u^2, dv = -u v
  CHECK(u1.du == MonomialList{{0, 0, Rational(-1)}, {2, 0, Rational(-1)}});
  CHECK(u1.dv == MonomialList{{1, 1, Rational(-1)}});
  CHECK(u1.source_degree == 1);
}

TEST_CASE("U3 chart is the original field") {
  const PlanarPolySystem sys = lienard_form(RayleighParams(2.0, 1));
  const ChartSystem u3 = chart_system(sys, ChartId::U3);
  CHECK(u3.du == sys.P);
  CHECK(u3.dv == sys.Q);
}

TEST_CASE("V charts carry the orientation factor") {
  const PlanarPolySystem odd = lienard_form(RayleighParams(1.0, 1));  // degree 3
  CHECK(chart_system(odd, ChartId::V1).du == chart_system(odd, ChartId::U1).du);
  CHECK(chart_system(odd, ChartId::V2).dv == chart_system(odd, ChartId::U2).dv);

  const PlanarPolySystem even = squares_system();  // degree 2
  const ChartSystem u1 = chart_system(even, ChartId::U1);
  const ChartSystem v1 = chart_system(even, ChartId::V1);
  CHECK(v1.du == scale(u1.du, Rational(-1)));
  CHECK(v1.dv == scale(u1.dv, Rational(-1)));
}

TEST_CASE("orientation factor") {
  CHECK(orientation_factor(1) == 1);
  CHECK(orientation_factor(2) == -1);
  CHECK(orientation_factor(3) == 1);
  CHECK_THROWS_AS(orientation_factor(0), std::invalid_argument);
}

TEST_CASE("chart_system rejects constant fields") {
  const PlanarPolySystem constant =
      PlanarPolySystem::make({{0, 0, Rational(1)}}, {{0, 0, Rational(2)}});
  CHECK_THROWS_AS(chart_system(constant, ChartId::U1), std::invalid_argument);
}

TEST_CASE("equator invariance: dv vanishes identically on v = 0") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::vector<PlanarPolySystem> systems = {lienard_form(RayleighParams(1.0, 2)),
                                           rayleigh_system(RayleighParams(-0.5, 1)),
                                           squares_system()};
  for (int extra = 0; extra < 6; ++extra) {
    MonomialList p, q;
    for (int i = 0; i <= 3; ++i) {
      for (int j = 0; i + j <= 3; ++j) {
        if (const int c = coeff(rng); c != 0) p.push_back({i, j, Rational(c)});
        if (const int c = coeff(rng); c != 0) q.push_back({i, j, Rational(c)});
      }
    }
    const PlanarPolySystem sys = PlanarPolySystem::make(std::move(p), std::move(q));
    if (sys.degree >= 1) systems.push_back(sys);
  }

  std::uniform_real_distribution<double> u_dist(-3.0, 3.0);
  for (const auto& sys : systems) {
    for (ChartId chart : {ChartId::U1, ChartId::U2, ChartId::V1, ChartId::V2}) {
      const ChartSystem cs = chart_system(sys, chart);
      for (const auto& m : cs.dv) CHECK(m.j >= 1);  // coefficient-level divisibility
      for (int k = 0; k < 5; ++k) {
        CHECK(evaluate(cs.dv, u_dist(rng), 0.0) == 0.0);
      }
    }
  }
}

TEST_CASE("infinite singular points of the family") {
  for (double a : {1.0, -2.0}) {
    const PlanarPolySystem sys = lienard_form(RayleighParams(a, 1));
    const auto points = infinite_equilibria(sys);
    REQUIRE(points.size() == 4);  // two diametral pairs

    CHECK(points[0].chart == ChartId::U1);
    CHECK(points[0].u == 0.0);
    REQUIRE(points[0].exact_u.has_value());
    CHECK(*points[0].exact_u == 0);
    CHECK(points[0].jac.m00 == -a);
    CHECK(points[0].jac.m11 == -a);
    CHECK(points[0].jac.m01 == 0.0);
    CHECK(points[0].jac.m10 == 0.0);
    CHECK(points[1].chart == ChartId::V1);
    CHECK(points[1].pair_id == points[0].pair_id);
    CHECK(points[1].jac.m00 == -a);  // odd degree: same local field

    CHECK(points[2].chart == ChartId::U2);
    CHECK(points[2].delta == 0.0);
    CHECK(points[2].gamma == 0.0);   // fully degenerate
    CHECK(points[3].chart == ChartId::V2);
  }
}

TEST_CASE("the linear center has no infinite singular points") {
  const auto points = infinite_equilibria(rayleigh_system(RayleighParams(0.0, 1)));
  CHECK(points.empty());
}

TEST_CASE("chart compatibility on the U1/U2 overlap") {
  // pushforward of the U1 field under (u, v) -> (1/u, v/u) must be a
  // positive multiple of the U2 field; on the u < 0 side the image lies in
  // the V2 chart, so even degrees pick up the orientation factor there
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> v_dist(0.05, 1.5);
  for (const PlanarPolySystem& sys :
       {lienard_form(RayleighParams(-1.0, 1)), squares_system()}) {
    const ChartSystem u1 = chart_system(sys, ChartId::U1);
    const ChartSystem u2 = chart_system(sys, ChartId::U2);
    int checked = 0;
    for (int attempt = 0; attempt < 1000 && checked < 50; ++attempt) {
      const double u = u_dist(rng), v = v_dist(rng);
      if (std::abs(u) < 0.05) continue;
      const double f1x = evaluate(u1.du, u, v), f1y = evaluate(u1.dv, u, v);
      double gx = -f1x / (u * u);
      double gy = -v * f1x / (u * u) + f1y / u;
      double f2x = evaluate(u2.du, 1 / u, v / u), f2y = evaluate(u2.dv, 1 / u, v / u);
      if (u < 0 && orientation_factor(sys.degree) == -1) {
        f2x = -f2x;
        f2y = -f2y;
      }
      const double gn = std::hypot(gx, gy), fn = std::hypot(f2x, f2y);
      if (gn < 1e-9 || fn < 1e-9) continue;
      CHECK(std::hypot(gx / gn - f2x / fn, gy / gn - f2y / fn) < 1e-8);
      ++checked;
    }
    CHECK(checked == 50);
  }
}

TEST_CASE("equator directions") {
  const Vec2 east = equator_direction(ChartId::U1, 0.0);
  CHECK(east.x == doctest::Approx(1.0));
  CHECK(east.y == doctest::Approx(0.0));
  const Vec2 north = equator_direction(ChartId::U2, 0.0);
  CHECK(north.y == doctest::Approx(1.0));
  const Vec2 south = equator_direction(ChartId::V2, 0.0);
  CHECK(south.y == doctest::Approx(-1.0));
  CHECK_THROWS_AS(equator_direction(ChartId::U3, 0.0), std::invalid_argument);
}
