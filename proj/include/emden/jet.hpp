#pragma once

#include <cmath>

namespace emden {

/// Truncated Taylor arithmetic carrying f, f' and f'' with respect to one
/// independent variable. Used to differentiate closed-form solutions exactly
/// (to rounding) instead of by finite differences.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT(implicit)
  constexpr Jet(double value, double first, double second) : v(value), d1(first), d2(second) {}

  static constexpr Jet variable(double t) { return {t, 1.0, 0.0}; }

  friend constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  friend constexpr Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
  }
  friend constexpr Jet operator/(const Jet& a, const Jet& b) {
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
  }
  constexpr Jet operator-() const { return {-v, -d1, -d2}; }
  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
};

namespace jet_detail {
/// Compose with a scalar function g given g(u), g'(u), g''(u).
constexpr Jet chain(const Jet& u, double g0, double g1, double g2) {
  return {g0, g1 * u.d1, g2 * u.d1 * u.d1 + g1 * u.d2};
}
}  // namespace jet_detail

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.v);
  return jet_detail::chain(u, e, e, e);
}
inline Jet log(const Jet& u) { return jet_detail::chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v)); }
inline Jet sqrt(const Jet& u) {
  const double s = std::sqrt(u.v);
  return jet_detail::chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Jet sin(const Jet& u) { return jet_detail::chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v)); }
inline Jet cos(const Jet& u) { return jet_detail::chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v)); }
/// Derivative of |u| taken as sign(u); the kink at u = 0 is not smoothed.
inline Jet abs(const Jet& u) {
  const double s = u.v < 0.0 ? -1.0 : 1.0;
  return {s * u.v, s * u.d1, s * u.d2};
}
inline Jet pow(const Jet& u, double p) {
  if (p == 0.0) return Jet(1.0);
  if (p == 1.0) return u;
  if (p == 2.0) return u * u;
  const double g0 = std::pow(u.v, p);
  const double g1 = p * std::pow(u.v, p - 1.0);
  const double g2 = p * (p - 1.0) * std::pow(u.v, p - 2.0);
  return jet_detail::chain(u, g0, g1, g2);
}
/// General power with a varying exponent, u^w = exp(w log u); requires u > 0.
inline Jet pow(const Jet& u, const Jet& w) {
  if (w.d1 == 0.0 && w.d2 == 0.0) return pow(u, w.v);
  return exp(w * log(u));
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace emden
