#pragma once

#include <map>
#include <string>
#include <tuple>

#include "emden/rational.hpp"

namespace emden::alg {

/// Exact real algebraic number of the form q * prod p_i^(e_i) with q rational
/// and each radical exponent e_i in (0,1). The radical part is canonical, so
/// two values are like terms iff their radicals compare equal.
class AlgebraicScalar {
 public:
  AlgebraicScalar() = default;
  AlgebraicScalar(Rational q) : coeff_(q) {}  // NOLINT(implicit)
  AlgebraicScalar(std::int64_t k) : coeff_(k) {}  // NOLINT(implicit)

  static AlgebraicScalar from_parts(Rational q, std::map<std::int64_t, Rational> radical);
  /// base^exponent; base must be positive unless exponent is an integer.
  static AlgebraicScalar power(Rational base, Rational exponent);

  const Rational& rational_part() const { return coeff_; }
  const std::map<std::int64_t, Rational>& radical() const { return radical_; }
  bool is_zero() const { return coeff_.is_zero(); }
  bool is_rational() const { return radical_.empty(); }
  double to_double() const;

  AlgebraicScalar pow(Rational exponent) const;
  friend AlgebraicScalar operator*(const AlgebraicScalar& a, const AlgebraicScalar& b);
  friend AlgebraicScalar operator/(const AlgebraicScalar& a, const AlgebraicScalar& b);
  AlgebraicScalar operator-() const;
  friend bool operator==(const AlgebraicScalar&, const AlgebraicScalar&) = default;

  std::string str() const;

 private:
  void normalize();
  Rational coeff_;
  std::map<std::int64_t, Rational> radical_;
};

/// w^a x^b v^c with exact rational exponents.
struct Monomial {
  Rational w;
  Rational x;
  Rational v;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& l, const Monomial& r) {
    if (auto c = l.w <=> r.w; c != 0) return c;
    if (auto c = l.x <=> r.x; c != 0) return c;
    return l.v <=> r.v;
  }
};

/// Finite sum of AlgebraicScalar * Monomial, like terms merged.
class Expansion {
 public:
  using Key = std::pair<Monomial, std::map<std::int64_t, Rational>>;

  void add(const AlgebraicScalar& c, const Monomial& m);
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Key, Rational>& terms() const { return terms_; }
  AlgebraicScalar coefficient(const Key& k) const;

  Expansion scaled(const AlgebraicScalar& c) const;
  friend Expansion operator-(const Expansion& a, const Expansion& b);
  friend bool operator==(const Expansion&, const Expansion&) = default;

  double evaluate(double w, double x, double v) const;
  /// Rendered with the base variable named `w`, e.g. "4/3*t^3*x^6 + 4*t^3*v^2".
  std::string str(const std::string& w = "w") const;

 private:
  std::map<Key, Rational> terms_;
};

/// x_p(t) = C * w(t)^e with w affine in t and dw/dt = lambda.
struct PowerLaw {
  AlgebraicScalar C;
  Rational e;
  Rational lambda;
};

/// Symbolic expansion of x^(n+1)/((n+1) x_p^(n+1)) + v^2/(2 xdot_p^2) - x v/(x_p xdot_p)
/// in powers of w. Requires n != -1 and e != 0.
Expansion particular_invariant(const PowerLaw& xp, const Rational& n);

struct ProportionalityReport {
  bool proportional = false;
  AlgebraicScalar ratio;  // candidate = ratio * reference when proportional
  Expansion residual;     // candidate - ratio * reference
};

/// Decide whether `candidate` is a constant multiple of `reference`.
ProportionalityReport compare_proportional(const Expansion& candidate, const Expansion& reference);

}  // namespace emden::alg
