#include "rayleigh/rational.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rayleigh {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("rational_from_double: value is not finite");
  }
  if (x == 0.0) return Rational(0);

  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  const auto mi = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;

  BigInt num(mi);
  if (exp >= 0) {
    num <<= exp;
    return Rational(num);
  }
  BigInt den(1);
  den <<= -exp;
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string rational_to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);  // > 0, reduced

  // Count the 2s and 5s in the denominator; a decimal expansion terminates
  // exactly when nothing else remains.
  BigInt rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) {
    return num.str() + "/" + den.str();
  }

  const int k = std::max(twos, fives);
  if (k == 0) return num.str();

  BigInt pow10(1);
  for (int t = 0; t < k; ++t) pow10 *= 10;
  BigInt scaled = num * pow10 / den;  // exact by construction

  const bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= k) {
    digits.insert(0, k + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - k, ".");
  // trim trailing zeros but keep at least one fractional digit
  while (digits.back() == '0' && digits[digits.size() - 2] != '.') digits.pop_back();
  return (neg ? "-" : "") + digits;
}

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational_from_string: empty string");

  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational_from_string: zero denominator");
    return Rational(num, den);
  }

  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    return Rational(BigInt(s));
  }

  std::string intpart = s.substr(0, dot);
  std::string fracpart = s.substr(dot + 1);
  bool neg = false;
  if (!intpart.empty() && (intpart[0] == '-' || intpart[0] == '+')) {
    neg = intpart[0] == '-';
    intpart = intpart.substr(1);
  }
  if (intpart.empty()) intpart = "0";
  std::string digits = intpart + fracpart;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') {
      throw std::invalid_argument("rational_from_string: bad character in '" + s + "'");
    }
  }
  // strip leading zeros; cpp_int would read a leading 0 as an octal prefix
  const auto first_nonzero = digits.find_first_not_of('0');
  digits = first_nonzero == std::string::npos ? "0" : digits.substr(first_nonzero);
  BigInt scaled(digits);
  BigInt den(1);
  for (std::size_t t = 0; t < fracpart.size(); ++t) den *= 10;
  Rational out(scaled, den);
  return neg ? Rational(-out) : out;
}

}  // namespace rayleigh
