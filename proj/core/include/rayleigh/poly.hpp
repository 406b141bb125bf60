#pragma once

#include "rayleigh/rational.hpp"

#include <optional>
#include <vector>

namespace rayleigh {

/// One term c * x^i * y^j of a bivariate polynomial. Canonical lists keep
/// c != 0, sorted by (i, j), one entry per exponent pair.
struct Monomial {
  int i = 0;
  int j = 0;
  Rational c;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

using MonomialList = std::vector<Monomial>;

MonomialList canonical(MonomialList terms);
MonomialList add(const MonomialList& a, const MonomialList& b);
MonomialList scale(const MonomialList& a, const Rational& s);
/// Multiply every term by c * x^di * y^dj. Negative shifts must clear, i.e.
/// every resulting exponent stays >= 0; throws std::domain_error otherwise.
MonomialList mul_monomial(const MonomialList& a, int di, int dj, const Rational& c);
MonomialList multiply(const MonomialList& a, const MonomialList& b);
/// Substitute x -> x + dx, y -> y + dy (binomial expansion, exact).
MonomialList shift_vars(const MonomialList& a, const Rational& dx, const Rational& dy);
/// Relabel x <-> y.
MonomialList swap_vars(const MonomialList& a);
MonomialList derivative_x(const MonomialList& a);
MonomialList derivative_y(const MonomialList& a);

int degree_of(const MonomialList& a);  // -1 for the zero polynomial
bool is_zero(const MonomialList& a);

double evaluate(const MonomialList& a, double x, double y);
Rational evaluate_exact(const MonomialList& a, const Rational& x, const Rational& y);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Mat2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;

  double det() const { return m00 * m11 - m01 * m10; }
  double trace() const { return m00 + m11; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Dense univariate polynomial with exact coefficients; coeff(k) multiplies x^k.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  static RationalPoly constant(const Rational& c);
  static RationalPoly monomial(int k, const Rational& c);

  int degree() const;  // -1 when zero
  bool is_zero() const { return coeffs_.empty(); }
  const Rational& coeff(int k) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  RationalPoly operator+(const RationalPoly& o) const;
  RationalPoly operator-(const RationalPoly& o) const;
  RationalPoly operator*(const RationalPoly& o) const;
  RationalPoly scaled(const Rational& s) const;
  RationalPoly truncated(int max_degree) const;
  RationalPoly derivative() const;
  RationalPoly antiderivative() const;  // constant of integration 0

  double eval(double x) const;
  Rational eval(const Rational& x) const;

  friend bool operator==(const RationalPoly&, const RationalPoly&) = default;

 private:
  void trim();
  std::vector<Rational> coeffs_;  // invariant: back() != 0 when nonempty
};

/// Substitute y -> s(x) into a bivariate polynomial, truncating the result
/// at max_degree. Used by the center-manifold series computation.
RationalPoly substitute_y(const MonomialList& a, const RationalPoly& s, int max_degree);

/// Collect the terms of a bivariate polynomial with j == 0 as a univariate
/// polynomial in x (i.e. restrict to the line y = 0).
RationalPoly restrict_y0(const MonomialList& a);

struct RealRoot {
  double value = 0.0;
  std::optional<Rational> exact;  // set when found by the rational pre-pass
};

/// All real roots, ascending. Exact rational roots (including multiplicity
/// collapse) are found by candidate testing and deflation; what remains goes
/// through a Durand-Kerner solve with Newton polish.
std::vector<RealRoot> real_roots(const RationalPoly& p);

}  // namespace rayleigh
