#include "rayleigh/vectorfield.hpp"

#include <cmath>
#include <stdexcept>

namespace rayleigh {

RayleighParams::RayleighParams(Rational a_, int n_) : a(std::move(a_)), n(n_) {
  if (n < 1) throw std::invalid_argument("RayleighParams: n must be >= 1");
}

RayleighParams::RayleighParams(double a_, int n_) : RayleighParams(rational_from_double(a_), n_) {}

std::string to_string(SystemForm f) { return f == SystemForm::Eq1 ? "eq1" : "eq2"; }

PlanarPolySystem PlanarPolySystem::make(MonomialList p, MonomialList q) {
  PlanarPolySystem sys;
  sys.P = canonical(std::move(p));
  sys.Q = canonical(std::move(q));
  sys.degree = std::max(degree_of(sys.P), degree_of(sys.Q));
  return sys;
}

PlanarPolySystem rayleigh_system(const RayleighParams& params) {
  // x' = y, y' = -x + a y - a y^{2n+1}
  MonomialList p = {{0, 1, Rational(1)}};
  MonomialList q = {{1, 0, Rational(-1)}, {0, 1, params.a}, {0, 2 * params.n + 1, -params.a}};
  return PlanarPolySystem::make(std::move(p), std::move(q));
}

PlanarPolySystem lienard_form(const RayleighParams& params) {
  // x' = y + a x^{2n+1} - a x, y' = -x
  MonomialList p = {{0, 1, Rational(1)}, {2 * params.n + 1, 0, params.a}, {1, 0, -params.a}};
  MonomialList q = {{1, 0, Rational(-1)}};
  return PlanarPolySystem::make(std::move(p), std::move(q));
}

PlanarPolySystem family_system(const RayleighParams& params, SystemForm form) {
  return form == SystemForm::Eq1 ? rayleigh_system(params) : lienard_form(params);
}

PlanarPolySystem swap_and_reverse(const PlanarPolySystem& sys) {
  // (x, y, t) -> (y, x, -t): new P(x,y) = -Q(y,x), new Q(x,y) = -P(y,x)
  return PlanarPolySystem::make(scale(swap_vars(sys.Q), Rational(-1)),
                                scale(swap_vars(sys.P), Rational(-1)));
}

PlanarPolySystem reverse_time(const PlanarPolySystem& sys) {
  return PlanarPolySystem::make(scale(sys.P, Rational(-1)), scale(sys.Q, Rational(-1)));
}

Vec2 evaluate(const PlanarPolySystem& sys, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::invalid_argument("evaluate: point is not finite");
  }
  return {evaluate(sys.P, x, y), evaluate(sys.Q, x, y)};
}

Mat2 jacobian(const PlanarPolySystem& sys, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::invalid_argument("jacobian: point is not finite");
  }
  Mat2 out;
  out.m00 = evaluate(derivative_x(sys.P), x, y);
  out.m01 = evaluate(derivative_y(sys.P), x, y);
  out.m10 = evaluate(derivative_x(sys.Q), x, y);
  out.m11 = evaluate(derivative_y(sys.Q), x, y);
  return out;
}

MonomialList divergence(const PlanarPolySystem& sys) {
  return add(derivative_x(sys.P), derivative_y(sys.Q));
}

CompiledSystem::CompiledSystem(const PlanarPolySystem& sys) {
  const MonomialList div = divergence(sys);
  for (const MonomialList* src : {&sys.P, &sys.Q, &div}) {
    for (const auto& m : *src) {
      max_i_ = std::max(max_i_, m.i);
      max_j_ = std::max(max_j_, m.j);
    }
  }
  if (max_i_ > 63 || max_j_ > 63) {
    throw std::invalid_argument("CompiledSystem: degree too large (limit 63 per variable)");
  }
  auto compile = [](const MonomialList& src) {
    std::vector<Term> out;
    out.reserve(src.size());
    for (const auto& m : src) out.push_back({m.i, m.j, to_double(m.c)});
    return out;
  };
  p_ = compile(sys.P);
  q_ = compile(sys.Q);
  div_ = compile(div);
}

double CompiledSystem::eval_terms(const std::vector<Term>& terms, const double* xp,
                                  const double* yp) {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.c * xp[t.i] * yp[t.j];
  return acc;
}

void CompiledSystem::eval(double x, double y, double& dx, double& dy) const {
  double xp[64], yp[64];
  xp[0] = 1.0;
  yp[0] = 1.0;
  for (int k = 1; k <= max_i_; ++k) xp[k] = xp[k - 1] * x;
  for (int k = 1; k <= max_j_; ++k) yp[k] = yp[k - 1] * y;
  dx = eval_terms(p_, xp, yp);
  dy = eval_terms(q_, xp, yp);
}

double CompiledSystem::divergence_at(double x, double y) const {
  double xp[64], yp[64];
  xp[0] = 1.0;
  yp[0] = 1.0;
  for (int k = 1; k <= max_i_; ++k) xp[k] = xp[k - 1] * x;
  for (int k = 1; k <= max_j_; ++k) yp[k] = yp[k - 1] * y;
  return eval_terms(div_, xp, yp);
}

}  // namespace rayleigh
