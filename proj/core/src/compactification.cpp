#include "rayleigh/compactification.hpp"

#include <cmath>
#include <stdexcept>

namespace rayleigh {

std::string to_string(ChartId id) {
  switch (id) {
    case ChartId::U1: return "U1";
    case ChartId::U2: return "U2";
    case ChartId::U3: return "U3";
    case ChartId::V1: return "V1";
    case ChartId::V2: return "V2";
    case ChartId::V3: return "V3";
  }
  return "?";
}

bool is_v_chart(ChartId id) {
  return id == ChartId::V1 || id == ChartId::V2 || id == ChartId::V3;
}

ChartId opposite_chart(ChartId id) {
  switch (id) {
    case ChartId::U1: return ChartId::V1;
    case ChartId::U2: return ChartId::V2;
    case ChartId::U3: return ChartId::V3;
    case ChartId::V1: return ChartId::U1;
    case ChartId::V2: return ChartId::U2;
    case ChartId::V3: return ChartId::U3;
  }
  return ChartId::U1;
}

int orientation_factor(int d) {
  if (d < 1) throw std::invalid_argument("orientation_factor: degree must be >= 1");
  return d % 2 == 1 ? 1 : -1;
}

ChartSystem chart_system(const PlanarPolySystem& sys, ChartId chart) {
  const int d = sys.degree;
  if (d < 1) {
    throw std::invalid_argument(
        "chart_system: constant field (degree 0) has no compactification multiplier");
  }

  ChartSystem out;
  out.chart = chart;
  out.source_degree = d;

  const ChartId base = is_v_chart(chart) ? opposite_chart(chart) : chart;

  MonomialList du, dv;
  if (base == ChartId::U3) {
    du = sys.P;
    dv = sys.Q;
  } else if (base == ChartId::U1) {
    // monomial c x^i y^j of P contributes -c u^{j+1} v^{d-i-j} to du and
    // -c u^j v^{d+1-i-j} to dv; of Q contributes c u^j v^{d-i-j} to du.
    for (const auto& m : sys.P) {
      du.push_back({m.j + 1, d - m.i - m.j, -m.c});
      dv.push_back({m.j, d + 1 - m.i - m.j, -m.c});
    }
    for (const auto& m : sys.Q) {
      du.push_back({m.j, d - m.i - m.j, m.c});
    }
  } else {  // U2
    for (const auto& m : sys.P) {
      du.push_back({m.i, d - m.i - m.j, m.c});
    }
    for (const auto& m : sys.Q) {
      du.push_back({m.i + 1, d - m.i - m.j, -m.c});
      dv.push_back({m.i, d + 1 - m.i - m.j, -m.c});
    }
  }

  out.du = canonical(std::move(du));
  out.dv = canonical(std::move(dv));
  if (is_v_chart(chart) && orientation_factor(d) == -1) {
    out.du = scale(out.du, Rational(-1));
    out.dv = scale(out.dv, Rational(-1));
  }
  return out;
}

namespace {

Mat2 chart_jacobian_at(const ChartSystem& cs, double u, double v) {
  Mat2 out;
  out.m00 = evaluate(derivative_x(cs.du), u, v);
  out.m01 = evaluate(derivative_y(cs.du), u, v);
  out.m10 = evaluate(derivative_x(cs.dv), u, v);
  out.m11 = evaluate(derivative_y(cs.dv), u, v);
  return out;
}

InfiniteSingularPoint make_point(const ChartSystem& cs, double u, std::optional<Rational> exact,
                                 int pair_id) {
  InfiniteSingularPoint pt;
  pt.chart = cs.chart;
  pt.u = u;
  pt.exact_u = std::move(exact);
  pt.jac = chart_jacobian_at(cs, u, 0.0);
  pt.delta = pt.jac.det();
  pt.gamma = pt.jac.trace();
  pt.pair_id = pair_id;
  return pt;
}

}  // namespace

std::vector<InfiniteSingularPoint> infinite_equilibria(const PlanarPolySystem& sys) {
  std::vector<InfiniteSingularPoint> out;
  int pair_id = 0;

  const ChartSystem u1 = chart_system(sys, ChartId::U1);
  const ChartSystem v1 = chart_system(sys, ChartId::V1);
  const RationalPoly on_equator = restrict_y0(u1.du);
  if (on_equator.is_zero()) {
    throw std::domain_error("infinite_equilibria: the whole equator is singular");
  }
  for (const auto& root : real_roots(on_equator)) {
    out.push_back(make_point(u1, root.value, root.exact, pair_id));
    out.push_back(make_point(v1, root.value, root.exact, pair_id));
    ++pair_id;
  }

  // U1 misses only the vertical directions (0, +-1), i.e. the U2 origin.
  const ChartSystem u2 = chart_system(sys, ChartId::U2);
  const RationalPoly u2_equator = restrict_y0(u2.du);
  if (u2_equator.eval(Rational(0)) == 0) {
    const ChartSystem v2 = chart_system(sys, ChartId::V2);
    out.push_back(make_point(u2, 0.0, Rational(0), pair_id));
    out.push_back(make_point(v2, 0.0, Rational(0), pair_id));
    ++pair_id;
  }
  return out;
}

Vec2 equator_direction(ChartId chart, double u) {
  const double norm = std::sqrt(1.0 + u * u);
  Vec2 dir;
  switch (chart) {
    case ChartId::U1: dir = {1.0 / norm, u / norm}; break;
    case ChartId::V1: dir = {-1.0 / norm, -u / norm}; break;
    case ChartId::U2: dir = {u / norm, 1.0 / norm}; break;
    case ChartId::V2: dir = {-u / norm, -1.0 / norm}; break;
    default:
      throw std::invalid_argument("equator_direction: only U1/V1/U2/V2 have equator points");
  }
  return dir;
}

}  // namespace rayleigh
