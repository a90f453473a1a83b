#include "emden/rational.hpp"

#include <cmath>
#include <limits>

namespace emden {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() + 1 &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational Rational::make(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits(num) || !fits(den)) throw DomainError("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::pow(std::int64_t k) const {
  Rational base = k < 0 ? Rational(1) / *this : *this;
  std::int64_t e = k < 0 ? -k : k;
  Rational acc(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return acc;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    const std::string frac = text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::string digits = text.substr(0, dot) + frac;
    if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
    return Rational(std::stoll(digits), den);
  } catch (const std::logic_error&) {
    throw InputError("not a rational literal: '" + text + "'");
  }
}

Rational Rational::from_double(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) throw DomainError("non-finite value has no rational form");
  for (std::int64_t den = 1; den <= max_den; ++den) {
    const double scaled = value * static_cast<double>(den);
    const double rounded = std::nearbyint(scaled);
    if (std::abs(rounded) > 9.0e15) break;
    if (static_cast<double>(static_cast<std::int64_t>(rounded)) / static_cast<double>(den) == value) {
      return Rational(static_cast<std::int64_t>(rounded), den);
    }
  }
  throw DomainError("no exact rational representation for " + std::to_string(value));
}

}  // namespace emden
