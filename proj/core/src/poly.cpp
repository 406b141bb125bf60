#include "rayleigh/poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

namespace rayleigh {

namespace {

Rational binomial(int n, int k) {
  Rational out(1);
  for (int t = 0; t < k; ++t) {
    out *= Rational(n - t);
    out /= Rational(t + 1);
  }
  return out;
}

}  // namespace

MonomialList canonical(MonomialList terms) {
  std::map<std::pair<int, int>, Rational> acc;
  for (const auto& m : terms) {
    if (m.i < 0 || m.j < 0) throw std::domain_error("monomial with negative exponent");
    acc[{m.i, m.j}] += m.c;
  }
  MonomialList out;
  out.reserve(acc.size());
  for (auto& [ij, c] : acc) {
    if (c != 0) out.push_back({ij.first, ij.second, std::move(c)});
  }
  return out;
}

MonomialList add(const MonomialList& a, const MonomialList& b) {
  MonomialList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return canonical(std::move(out));
}

MonomialList scale(const MonomialList& a, const Rational& s) {
  if (s == 0) return {};
  MonomialList out = a;
  for (auto& m : out) m.c *= s;
  return out;
}

MonomialList mul_monomial(const MonomialList& a, int di, int dj, const Rational& c) {
  if (c == 0) return {};
  MonomialList out;
  out.reserve(a.size());
  for (const auto& m : a) {
    const int ni = m.i + di;
    const int nj = m.j + dj;
    if (ni < 0 || nj < 0) {
      throw std::domain_error("mul_monomial: negative exponent does not clear");
    }
    out.push_back({ni, nj, m.c * c});
  }
  return canonical(std::move(out));
}

MonomialList multiply(const MonomialList& a, const MonomialList& b) {
  MonomialList out;
  out.reserve(a.size() * b.size());
  for (const auto& ma : a) {
    for (const auto& mb : b) {
      out.push_back({ma.i + mb.i, ma.j + mb.j, ma.c * mb.c});
    }
  }
  return canonical(std::move(out));
}

MonomialList shift_vars(const MonomialList& a, const Rational& dx, const Rational& dy) {
  MonomialList out;
  for (const auto& m : a) {
    // (x+dx)^i (y+dy)^j expanded term by term
    std::vector<Rational> xpow(m.i + 1), ypow(m.j + 1);
    xpow[0] = 1;
    for (int t = 1; t <= m.i; ++t) xpow[t] = xpow[t - 1] * dx;
    ypow[0] = 1;
    for (int t = 1; t <= m.j; ++t) ypow[t] = ypow[t - 1] * dy;
    for (int p = 0; p <= m.i; ++p) {
      for (int q = 0; q <= m.j; ++q) {
        Rational c = m.c * binomial(m.i, p) * binomial(m.j, q) * xpow[m.i - p] * ypow[m.j - q];
        out.push_back({p, q, std::move(c)});
      }
    }
  }
  return canonical(std::move(out));
}

MonomialList swap_vars(const MonomialList& a) {
  MonomialList out = a;
  for (auto& m : out) std::swap(m.i, m.j);
  return canonical(std::move(out));
}

MonomialList derivative_x(const MonomialList& a) {
  MonomialList out;
  for (const auto& m : a) {
    if (m.i >= 1) out.push_back({m.i - 1, m.j, m.c * m.i});
  }
  return canonical(std::move(out));
}

MonomialList derivative_y(const MonomialList& a) {
  MonomialList out;
  for (const auto& m : a) {
    if (m.j >= 1) out.push_back({m.i, m.j - 1, m.c * m.j});
  }
  return canonical(std::move(out));
}

int degree_of(const MonomialList& a) {
  int d = -1;
  for (const auto& m : a) d = std::max(d, m.i + m.j);
  return d;
}

bool is_zero(const MonomialList& a) { return a.empty(); }

double evaluate(const MonomialList& a, double x, double y) {
  // Horner per variable: collect terms by x-power (the list is sorted by
  // (i, j)), evaluate each slice in y by Horner, then Horner over x.
  if (a.empty()) return 0.0;
  double result = 0.0;
  int prev_i = a.back().i;  // highest x power
  std::size_t idx = a.size();
  while (idx > 0) {
    // slice of equal i, descending j within [lo, idx)
    std::size_t lo = idx;
    const int cur_i = a[idx - 1].i;
    while (lo > 0 && a[lo - 1].i == cur_i) --lo;
    double slice = 0.0;
    int prev_j = a[idx - 1].j;
    for (std::size_t t = idx; t-- > lo;) {
      slice = slice * std::pow(y, prev_j - a[t].j) + to_double(a[t].c);
      prev_j = a[t].j;
    }
    slice *= std::pow(y, prev_j);
    result = result * std::pow(x, prev_i - cur_i) + slice;
    prev_i = cur_i;
    idx = lo;
  }
  return result * std::pow(x, prev_i);
}

Rational evaluate_exact(const MonomialList& a, const Rational& x, const Rational& y) {
  Rational out(0);
  for (const auto& m : a) {
    Rational term = m.c;
    for (int t = 0; t < m.i; ++t) term *= x;
    for (int t = 0; t < m.j; ++t) term *= y;
    out += term;
  }
  return out;
}

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::monomial(int k, const Rational& c) {
  if (k < 0) throw std::domain_error("RationalPoly::monomial: negative degree");
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

int RationalPoly::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

const Rational& RationalPoly::coeff(int k) const {
  static const Rational zero(0);
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return zero;
  return coeffs_[k];
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
  std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k < coeffs_.size()) v[k] += coeffs_[k];
    if (k < o.coeffs_.size()) v[k] += o.coeffs_[k];
  }
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const {
  return *this + o.scaled(Rational(-1));
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    for (std::size_t q = 0; q < o.coeffs_.size(); ++q) {
      v[p + q] += coeffs_[p] * o.coeffs_[q];
    }
  }
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::scaled(const Rational& s) const {
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c *= s;
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::truncated(int max_degree) const {
  if (max_degree < 0) return {};
  std::vector<Rational> v(coeffs_.begin(),
                          coeffs_.begin() + std::min<std::size_t>(coeffs_.size(), max_degree + 1));
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> v(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) v[k - 1] = coeffs_[k] * Rational(static_cast<int>(k));
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::antiderivative() const {
  std::vector<Rational> v(coeffs_.size() + 1);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    v[k + 1] = coeffs_[k] / Rational(static_cast<int>(k) + 1);
  }
  return RationalPoly(std::move(v));
}

double RationalPoly::eval(double x) const {
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + to_double(coeffs_[k]);
  return acc;
}

Rational RationalPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
  return acc;
}

RationalPoly substitute_y(const MonomialList& a, const RationalPoly& s, int max_degree) {
  RationalPoly out;
  for (const auto& m : a) {
    if (m.i > max_degree) continue;
    RationalPoly term = RationalPoly::monomial(m.i, m.c);
    for (int t = 0; t < m.j && !term.is_zero(); ++t) {
      term = (term * s).truncated(max_degree);
    }
    out = out + term.truncated(max_degree);
  }
  return out;
}

RationalPoly restrict_y0(const MonomialList& a) {
  std::vector<Rational> v;
  for (const auto& m : a) {
    if (m.j != 0) continue;
    if (static_cast<int>(v.size()) <= m.i) v.resize(m.i + 1);
    v[m.i] = m.c;
  }
  return RationalPoly(std::move(v));
}

namespace {

// Exact synthetic division by (x - r); requires r to be a root.
RationalPoly deflate(const RationalPoly& p, const Rational& r) {
  const int n = p.degree();
  std::vector<Rational> q(n);
  Rational carry(0);
  for (int k = n; k >= 1; --k) {
    carry = p.coeff(k) + carry * r;
    q[k - 1] = carry;
  }
  return RationalPoly(std::move(q));
}

std::vector<BigInt> small_divisors(const BigInt& value) {
  std::vector<BigInt> out;
  BigInt v = value < 0 ? BigInt(-value) : value;
  if (v == 0 || v > BigInt(1000000000000LL)) return out;  // skip the pre-pass, numerics cover it
  for (BigInt d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      out.push_back(v / d);
    }
  }
  return out;
}

std::vector<double> durand_kerner(const RationalPoly& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  std::vector<std::complex<double>> c(n + 1);
  const double lead = to_double(p.coeff(n));
  for (int k = 0; k <= n; ++k) c[k] = to_double(p.coeff(k)) / lead;

  auto eval_monic = [&](std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (int k = n; k >= 0; --k) acc = acc * z + c[k];
    return acc;
  };

  std::vector<std::complex<double>> z(n);
  const std::complex<double> seed(0.4, 0.9);
  z[0] = seed;
  for (int k = 1; k < n; ++k) z[k] = z[k - 1] * seed;

  for (int iter = 0; iter < 500; ++iter) {
    double max_delta = 0.0;
    for (int k = 0; k < n; ++k) {
      std::complex<double> denom = 1.0;
      for (int l = 0; l < n; ++l) {
        if (l != k) denom *= z[k] - z[l];
      }
      if (std::abs(denom) < 1e-300) continue;
      const std::complex<double> delta = eval_monic(z[k]) / denom;
      z[k] -= delta;
      max_delta = std::max(max_delta, std::abs(delta));
    }
    if (max_delta < 1e-14) break;
  }

  // keep (near-)real candidates, polish with Newton on the original poly
  const RationalPoly dp = p.derivative();
  std::vector<double> out;
  for (const auto& zk : z) {
    if (std::abs(zk.imag()) > 1e-7 * (1.0 + std::abs(zk.real()))) continue;
    double x = zk.real();
    for (int it = 0; it < 50; ++it) {
      const double f = p.eval(x);
      const double df = dp.eval(x);
      if (df == 0.0) break;
      const double step = f / df;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    if (std::abs(p.eval(x)) > 1e-8 * (1.0 + std::abs(to_double(p.coeff(p.degree()))))) continue;
    bool dup = false;
    for (double seen : out) {
      if (std::abs(seen - x) < 1e-7 * (1.0 + std::abs(x))) dup = true;
    }
    if (!dup) out.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<RealRoot> real_roots(const RationalPoly& p) {
  if (p.degree() <= 0) return {};

  RationalPoly work = p;
  std::vector<RealRoot> roots;

  // roots at zero
  int zero_mult = 0;
  while (work.degree() >= 1 && work.coeff(0) == 0) {
    work = deflate(work, Rational(0));
    ++zero_mult;
  }
  if (zero_mult > 0) roots.push_back({0.0, Rational(0)});

  // rational candidates p/q with p | a0 and q | a_lead (integer-scaled poly)
  if (work.degree() >= 1) {
    BigInt den_lcm(1);
    for (const auto& c : work.coeffs()) {
      den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(c));
    }
    const BigInt a0 = boost::multiprecision::numerator(work.coeff(0) * Rational(den_lcm));
    const BigInt alead =
        boost::multiprecision::numerator(work.coeff(work.degree()) * Rational(den_lcm));
    const auto nums = small_divisors(a0);
    const auto dens = small_divisors(alead);
    for (const auto& nu : nums) {
      for (const auto& de : dens) {
        for (int sign : {1, -1}) {
          const Rational cand(sign * nu, de);
          bool found = false;
          while (work.degree() >= 1 && work.eval(cand) == 0) {
            work = deflate(work, cand);
            found = true;
          }
          if (found) roots.push_back({to_double(cand), cand});
        }
      }
    }
  }

  for (double x : durand_kerner(work)) {
    bool dup = false;
    for (const auto& r : roots) {
      if (std::abs(r.value - x) < 1e-9 * (1.0 + std::abs(x))) dup = true;
    }
    if (!dup) roots.push_back({x, std::nullopt});
  }

  std::sort(roots.begin(), roots.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

}  // namespace rayleigh
