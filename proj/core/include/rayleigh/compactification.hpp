#pragma once

#include "rayleigh/vectorfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rayleigh {

/// Local charts of the sphere compactification. U1/U2/U3 cover y_k > 0,
/// V1/V2/V3 the antipodal hemispheres; the V_k field equals the U_k field
/// times (-1)^(d-1).
enum class ChartId { U1, U2, U3, V1, V2, V3 };

std::string to_string(ChartId id);
bool is_v_chart(ChartId id);
ChartId opposite_chart(ChartId id);

/// The compactified field in one local chart, as exact polynomials in (u, v).
/// In U1/U2 the equator is v = 0 and dv is divisible by v. The monomial
/// lists reuse Monomial with i as the u-exponent and j as the v-exponent.
struct ChartSystem {
  ChartId chart = ChartId::U3;
  MonomialList du;
  MonomialList dv;
  int source_degree = 0;

  friend bool operator==(const ChartSystem&, const ChartSystem&) = default;
};

/// (-1)^(d-1): the factor relating antipodal charts. Even degrees reverse
/// the orbit orientation on the V side.
int orientation_factor(int d);

/// Exact chart expression of the compactified field:
///   U1: du = v^d (-u P(1/v, u/v) + Q(1/v, u/v)),  dv = -v^{d+1} P(1/v, u/v)
///   U2: du = v^d ( P(u/v, 1/v) - u Q(u/v, 1/v)),  dv = -v^{d+1} Q(u/v, 1/v)
///   U3: du = P(u, v),                             dv = Q(u, v)
/// All negative powers clear against the v^d / v^{d+1} factors because the
/// system has degree d. Throws std::invalid_argument for degree 0 fields.
ChartSystem chart_system(const PlanarPolySystem& sys, ChartId chart);

/// Singular point on the equator of one chart, located at (u, 0).
/// Classification beyond the Jacobian data is localanalysis' job.
struct InfiniteSingularPoint {
  ChartId chart = ChartId::U1;
  double u = 0.0;
  std::optional<Rational> exact_u;  // set when the root was found exactly
  Mat2 jac;                         // chart-field Jacobian at (u, 0)
  double delta = 0.0;
  double gamma = 0.0;
  int pair_id = 0;  // shared by a point and its diametral opposite
};

/// All infinite singular points: roots of the U1 field restricted to v = 0
/// (covering every equator direction except (0, +-1)) plus the U2 origin
/// when it is singular, each paired with its V-chart opposite.
std::vector<InfiniteSingularPoint> infinite_equilibria(const PlanarPolySystem& sys);

/// Direction (cos t, sin t) on the plane's circle at infinity represented by
/// an equator point (u, 0) of the given chart.
Vec2 equator_direction(ChartId chart, double u);

}  // namespace rayleigh
