#include "emden/algebraic.hpp"

#include <cmath>
#include <vector>

namespace emden::alg {

namespace {

std::vector<std::pair<std::int64_t, std::int64_t>> factor(std::int64_t m) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (m < 0) m = -m;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    std::int64_t k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    if (k > 0) out.emplace_back(p, k);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

std::string power_str(const std::string& base, const Rational& e) {
  if (e == Rational(1)) return base;
  if (e.is_integer() && e.num() > 0) return base + "^" + e.str();
  return base + "^(" + e.str() + ")";
}

}  // namespace

AlgebraicScalar AlgebraicScalar::from_parts(Rational q, std::map<std::int64_t, Rational> radical) {
  AlgebraicScalar s(q);
  s.radical_ = std::move(radical);
  s.normalize();
  return s;
}

void AlgebraicScalar::normalize() {
  if (coeff_.is_zero()) {
    radical_.clear();
    return;
  }
  for (auto it = radical_.begin(); it != radical_.end();) {
    const std::int64_t whole = it->second.floor();
    if (whole != 0) {
      coeff_ *= Rational(it->first).pow(whole);
      it->second -= Rational(whole);
    }
    if (it->second.is_zero())
      it = radical_.erase(it);
    else
      ++it;
  }
}

AlgebraicScalar AlgebraicScalar::power(Rational base, Rational exponent) {
  if (exponent.is_integer()) return AlgebraicScalar(base.pow(exponent.num()));
  if (base.is_zero()) {
    if (exponent > Rational(0)) return AlgebraicScalar();
    throw DomainError("0 raised to a nonpositive power");
  }
  if (base < Rational(0)) throw DomainError("negative base " + base.str() + " raised to " + exponent.str());
  std::map<std::int64_t, Rational> rad;
  for (auto [p, k] : factor(base.num())) rad[p] += Rational(k) * exponent;
  for (auto [p, k] : factor(base.den())) rad[p] -= Rational(k) * exponent;
  return from_parts(Rational(1), std::move(rad));
}

AlgebraicScalar AlgebraicScalar::pow(Rational exponent) const {
  AlgebraicScalar out = power(coeff_, exponent);
  for (const auto& [p, e] : radical_) out.radical_[p] += e * exponent;
  out.normalize();
  return out;
}

AlgebraicScalar operator*(const AlgebraicScalar& a, const AlgebraicScalar& b) {
  AlgebraicScalar out(a.coeff_ * b.coeff_);
  out.radical_ = a.radical_;
  for (const auto& [p, e] : b.radical_) out.radical_[p] += e;
  out.normalize();
  return out;
}

AlgebraicScalar operator/(const AlgebraicScalar& a, const AlgebraicScalar& b) {
  if (b.is_zero()) throw DomainError("algebraic division by zero");
  return a * b.pow(Rational(-1));
}

AlgebraicScalar AlgebraicScalar::operator-() const {
  AlgebraicScalar out = *this;
  out.coeff_ = -coeff_;
  return out;
}

double AlgebraicScalar::to_double() const {
  double v = coeff_.to_double();
  for (const auto& [p, e] : radical_) v *= std::pow(static_cast<double>(p), e.to_double());
  return v;
}

std::string AlgebraicScalar::str() const {
  std::string out = coeff_.str();
  for (const auto& [p, e] : radical_) out += "*" + power_str(std::to_string(p), e);
  return out;
}

void Expansion::add(const AlgebraicScalar& c, const Monomial& m) {
  if (c.is_zero()) return;
  const Key key{m, c.radical()};
  Rational& slot = terms_[key];
  slot += c.rational_part();
  if (slot.is_zero()) terms_.erase(key);
}

AlgebraicScalar Expansion::coefficient(const Key& k) const {
  auto it = terms_.find(k);
  if (it == terms_.end()) return AlgebraicScalar();
  return AlgebraicScalar::from_parts(it->second, k.second);
}

Expansion Expansion::scaled(const AlgebraicScalar& c) const {
  Expansion out;
  for (const auto& [k, q] : terms_) out.add(AlgebraicScalar::from_parts(q, k.second) * c, k.first);
  return out;
}

Expansion operator-(const Expansion& a, const Expansion& b) {
  Expansion out = a;
  for (const auto& [k, q] : b.terms_) out.add(AlgebraicScalar::from_parts(-q, k.second), k.first);
  return out;
}

double Expansion::evaluate(double w, double x, double v) const {
  double sum = 0.0;
  for (const auto& [k, q] : terms_) {
    const double c = AlgebraicScalar::from_parts(q, k.second).to_double();
    sum += c * std::pow(w, k.first.w.to_double()) * std::pow(x, k.first.x.to_double()) *
           std::pow(v, k.first.v.to_double());
  }
  return sum;
}

std::string Expansion::str(const std::string& w) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, q] : terms_) {
    AlgebraicScalar c = AlgebraicScalar::from_parts(q, k.second);
    const bool negative = q < Rational(0);
    if (negative) c = -c;
    out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
    std::vector<std::string> parts;
    if (!(c.is_rational() && c.rational_part() == Rational(1))) parts.push_back(c.str());
    if (!k.first.w.is_zero()) parts.push_back(power_str(w, k.first.w));
    if (!k.first.x.is_zero()) parts.push_back(power_str("x", k.first.x));
    if (!k.first.v.is_zero()) parts.push_back(power_str("v", k.first.v));
    if (parts.empty()) parts.push_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  }
  return out;
}

Expansion particular_invariant(const PowerLaw& xp, const Rational& n) {
  if (n == Rational(-1)) throw InputError("power form of the invariant needs n != -1");
  if (xp.e.is_zero() || xp.lambda.is_zero()) throw InputError("particular solution must be nonconstant");
  const Rational n1 = n + Rational(1);
  const AlgebraicScalar C = xp.C;
  const AlgebraicScalar dC = C * AlgebraicScalar(xp.e * xp.lambda);  // xdot_p = dC * w^(e-1)
  Expansion out;
  out.add(AlgebraicScalar(Rational(1) / n1) * C.pow(-n1), {-xp.e * n1, n1, Rational(0)});
  out.add(AlgebraicScalar(Rational(1, 2)) * dC.pow(Rational(-2)), {Rational(-2) * (xp.e - Rational(1)), 0, 2});
  out.add(-(C * dC).pow(Rational(-1)), {-(Rational(2) * xp.e - Rational(1)), 1, 1});
  return out;
}

ProportionalityReport compare_proportional(const Expansion& candidate, const Expansion& reference) {
  ProportionalityReport r;
  if (reference.is_zero() || candidate.is_zero()) {
    r.proportional = candidate.is_zero() && reference.is_zero();
    r.ratio = AlgebraicScalar(r.proportional ? 1 : 0);
    r.residual = candidate;
    return r;
  }
  const auto& [ref_key, ref_q] = *reference.terms().begin();
  const AlgebraicScalar ref_c = AlgebraicScalar::from_parts(ref_q, ref_key.second);
  bool tried = false;
  for (const auto& [k, q] : candidate.terms()) {
    if (!(k.first == ref_key.first)) continue;
    tried = true;
    const AlgebraicScalar ratio = AlgebraicScalar::from_parts(q, k.second) / ref_c;
    Expansion res = candidate - reference.scaled(ratio);
    if (res.is_zero()) return {true, ratio, res};
    if (!r.residual.size() || res.size() < r.residual.size()) {
      r.ratio = ratio;
      r.residual = res;
    }
  }
  if (!tried) r.residual = candidate;
  return r;
}

}  // namespace emden::alg
