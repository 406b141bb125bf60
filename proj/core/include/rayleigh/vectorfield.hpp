#pragma once

#include "rayleigh/poly.hpp"

#include <string>

namespace rayleigh {

/// Parameters of the damped oscillator family
///   x'' + x = a (1 - (x')^{2n}) x'.
/// The damping parameter is kept as an exact rational so downstream
/// substitutions stay coefficient-exact; doubles convert losslessly.
struct RayleighParams {
  Rational a;
  int n = 1;

  RayleighParams(Rational a_, int n_);
  RayleighParams(double a_, int n_);

  double a_value() const { return to_double(a); }
};

/// Which first-order reduction of the oscillator is in play.
///  Eq1: x' = y,                    y' = -x + a(1 - y^{2n}) y
///  Eq2: x' = y + a(x^{2n} - 1) x,  y' = -x        (Lienard form, obtained
///       from Eq1 through (x, y, t) -> (y, x, -t))
enum class SystemForm { Eq1, Eq2 };

std::string to_string(SystemForm f);

/// Planar polynomial vector field (P, Q) with its degree. Immutable after
/// construction; the monomial lists are canonical (sorted, deduplicated,
/// nonzero coefficients).
struct PlanarPolySystem {
  MonomialList P;
  MonomialList Q;
  int degree = 0;

  static PlanarPolySystem make(MonomialList p, MonomialList q);

  friend bool operator==(const PlanarPolySystem&, const PlanarPolySystem&) = default;
};

PlanarPolySystem rayleigh_system(const RayleighParams& params);
PlanarPolySystem lienard_form(const RayleighParams& params);
PlanarPolySystem family_system(const RayleighParams& params, SystemForm form);

/// The involution linking the two reductions: (x, y, t) -> (y, x, -t).
PlanarPolySystem swap_and_reverse(const PlanarPolySystem& sys);
PlanarPolySystem reverse_time(const PlanarPolySystem& sys);

Vec2 evaluate(const PlanarPolySystem& sys, double x, double y);
Mat2 jacobian(const PlanarPolySystem& sys, double x, double y);
/// Divergence P_x + Q_y as a polynomial.
MonomialList divergence(const PlanarPolySystem& sys);

/// Double-precision form for tight integration loops: coefficients converted
/// once, powers built iteratively per evaluation.
class CompiledSystem {
 public:
  explicit CompiledSystem(const PlanarPolySystem& sys);

  void eval(double x, double y, double& dx, double& dy) const;
  double divergence_at(double x, double y) const;

 private:
  struct Term {
    int i, j;
    double c;
  };
  std::vector<Term> p_, q_, div_;
  int max_i_ = 0, max_j_ = 0;

  static double eval_terms(const std::vector<Term>& terms, const double* xp, const double* yp);
};

}  // namespace rayleigh
