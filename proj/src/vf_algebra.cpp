#include "emden/vf_algebra.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

namespace emden::vf {

// ---------------------------------------------------------------- Scalar

Scalar Scalar::real(double r) {
  Scalar s;
  s.approx_ = r;
  s.is_exact_ = false;
  return s;
}

const Rational& Scalar::exact() const {
  if (!is_exact_) throw Error("exact value requested from a real-valued coefficient");
  return exact_;
}

bool Scalar::is_zero() const { return is_exact_ ? exact_.is_zero() : std::abs(approx_) < kRealTolerance; }

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact_ && b.is_exact_) return Scalar(a.exact_ + b.exact_);
  return Scalar::real(a.approx_ + b.approx_);
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact_ && b.is_exact_) return Scalar(a.exact_ - b.exact_);
  return Scalar::real(a.approx_ - b.approx_);
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact_ && b.is_exact_) return Scalar(a.exact_ * b.exact_);
  return Scalar::real(a.approx_ * b.approx_);
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw DomainError("coefficient division by zero");
  if (a.is_exact_ && b.is_exact_) return Scalar(a.exact_ / b.exact_);
  return Scalar::real(a.approx_ / b.approx_);
}
Scalar Scalar::operator-() const { return is_exact_ ? Scalar(-exact_) : Scalar::real(-approx_); }

std::string Scalar::str() const {
  if (is_exact_) return exact_.str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", approx_);
  return buf;
}

// ---------------------------------------------------------------- NPoly

NPoly::NPoly(Scalar c) {
  terms_.push_back(c);
  trim();
}

NPoly NPoly::n() {
  NPoly p;
  p.terms_ = {Scalar(0), Scalar(1)};
  return p;
}

void NPoly::trim() {
  while (!terms_.empty() && terms_.back().is_zero()) terms_.pop_back();
}

bool NPoly::is_exact() const {
  for (const auto& c : terms_)
    if (!c.is_exact()) return false;
  return true;
}

Scalar NPoly::at(const Scalar& n_value) const {
  Scalar acc(0);
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) acc = acc * n_value + *it;
  return acc;
}

NPoly operator+(const NPoly& a, const NPoly& b) {
  NPoly r;
  r.terms_.resize(std::max(a.terms_.size(), b.terms_.size()), Scalar(0));
  for (std::size_t i = 0; i < a.terms_.size(); ++i) r.terms_[i] = r.terms_[i] + a.terms_[i];
  for (std::size_t i = 0; i < b.terms_.size(); ++i) r.terms_[i] = r.terms_[i] + b.terms_[i];
  r.trim();
  return r;
}

NPoly NPoly::operator-() const {
  NPoly r = *this;
  for (auto& c : r.terms_) c = -c;
  return r;
}

NPoly operator-(const NPoly& a, const NPoly& b) { return a + (-b); }

NPoly operator*(const NPoly& a, const NPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  NPoly r;
  r.terms_.assign(a.terms_.size() + b.terms_.size() - 1, Scalar(0));
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    for (std::size_t j = 0; j < b.terms_.size(); ++j) r.terms_[i + j] = r.terms_[i + j] + a.terms_[i] * b.terms_[j];
  r.trim();
  return r;
}

NPoly NPoly::divided_by(const Scalar& s) const {
  NPoly r = *this;
  for (auto& c : r.terms_) c = c / s;
  r.trim();
  return r;
}

std::string NPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = terms_.size(); k-- > 0;) {
    const Scalar& c = terms_[k];
    if (c.is_zero()) continue;
    std::string mag = c.str();
    const bool negative = !mag.empty() && mag[0] == '-';
    if (negative) mag.erase(0, 1);
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    const bool unit = mag == "1";
    if (k == 0)
      out += mag;
    else {
      if (!unit) out += mag + "*";
      out += k == 1 ? "n" : "n^" + std::to_string(k);
    }
  }
  return out;
}

// ---------------------------------------------------------------- Exponent

NPoly Exponent::as_poly() const { return NPoly(Scalar(c0)) + NPoly(Scalar(c1)) * NPoly::n(); }

std::string Exponent::str() const {
  if (c1.is_zero()) return c0.str();
  std::string out = c1 == Rational(1) ? "n" : (c1 == Rational(-1) ? "-n" : c1.str() + "*n");
  if (!c0.is_zero()) out += (c0 < Rational(0) ? "-" : "+") + (c0 < Rational(0) ? (-c0).str() : c0.str());
  return out;
}

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::monomial(NPoly coefficient, Exponent x_exp, Exponent v_exp) {
  Polynomial p;
  p.add_term({x_exp, v_exp}, coefficient);
  return p;
}

void Polynomial::add_term(const Powers& p, const NPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(p, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [p, c] : b.terms_) r.add_term(p, c);
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [p, c] : b.terms_) r.add_term(p, -c);
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) r.add_term({pa.x + pb.x, pa.v + pb.v}, ca * cb);
  return r;
}

Polynomial Polynomial::scaled(const NPoly& c) const {
  Polynomial r;
  for (const auto& [p, k] : terms_) r.add_term(p, k * c);
  return r;
}

Polynomial Polynomial::d_dx() const {
  Polynomial r;
  for (const auto& [p, c] : terms_) {
    if (p.x.is_zero()) continue;
    r.add_term({p.x - Exponent::constant(1), p.v}, c * p.x.as_poly());
  }
  return r;
}

Polynomial Polynomial::d_dv() const {
  Polynomial r;
  for (const auto& [p, c] : terms_) {
    if (p.v.is_zero()) continue;
    r.add_term({p.x, p.v - Exponent::constant(1)}, c * p.v.as_poly());
  }
  return r;
}

Polynomial Polynomial::instantiate(const Rational& n) const {
  Polynomial r;
  auto fix = [&](const Exponent& e) { return Exponent::constant(e.c0 + e.c1 * n); };
  for (const auto& [p, c] : terms_) r.add_term({fix(p.x), fix(p.v)}, NPoly(c.at(Scalar(n))));
  return r;
}

double Polynomial::evaluate(double x, double v, double n) const {
  double sum = 0.0;
  for (const auto& [p, c] : terms_) {
    const double coeff = c.at(Scalar::real(n)).to_double();
    const double xe = p.x.c0.to_double() + p.x.c1.to_double() * n;
    const double ve = p.v.c0.to_double() + p.v.c1.to_double() * n;
    sum += coeff * (xe == 0.0 ? 1.0 : std::pow(x, xe)) * (ve == 0.0 ? 1.0 : std::pow(v, ve));
  }
  return sum;
}

namespace {

std::string power_str(const char* var, const Exponent& e) {
  if (e.is_zero()) return "";
  if (e == Exponent::constant(1)) return var;
  const std::string s = e.str();
  const bool simple = e.c1.is_zero() ? e.c0.is_integer() && !(e.c0 < Rational(0)) : e.c0.is_zero() && e.c1 == Rational(1);
  return std::string(var) + "^" + (simple ? s : "(" + s + ")");
}

std::string term_str(const Powers& p, const NPoly& c, bool first) {
  std::string mono = power_str("x", p.x);
  const std::string vp = power_str("v", p.v);
  if (!vp.empty()) mono += (mono.empty() ? "" : "*") + vp;
  std::string coeff = c.str();
  bool negative = false;
  if (c.is_constant() && coeff[0] == '-') {
    negative = true;
    coeff.erase(0, 1);
  }
  std::string body;
  if (mono.empty())
    body = coeff;
  else if (coeff == "1")
    body = mono;
  else if (c.is_constant() || coeff.find(' ') == std::string::npos)
    body = coeff + "*" + mono;
  else
    body = "(" + coeff + ")*" + mono;
  if (first) return (negative ? "-" : "") + body;
  return (negative ? " - " : " + ") + body;
}

}  // namespace

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    out += term_str(p, c, first);
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- VectorField

Polynomial VectorField::apply(const Polynomial& f) const { return x_ * f.d_dx() + v_ * f.d_dv(); }

bool VectorField::is_exact() const {
  for (const auto* comp : {&x_, &v_})
    for (const auto& [p, c] : comp->terms())
      if (!c.is_exact()) return false;
  return true;
}

std::string VectorField::str() const {
  if (is_zero()) return "0";
  std::string out;
  auto append = [&](const Polynomial& comp, const char* d) {
    for (const auto& [p, c] : comp.terms()) {
      out += term_str(p, c, out.empty());
      out += " ";
      out += d;
    }
  };
  append(x_, "d/dx");
  append(v_, "d/dv");
  return out;
}

VectorField bracket(const VectorField& a, const VectorField& b) {
  return {a.apply(b.x_component()) - b.apply(a.x_component()), a.apply(b.v_component()) - b.apply(a.v_component())};
}

namespace {

VectorField field(NPoly c, Exponent xe, Exponent ve, bool along_v) {
  Polynomial p = Polynomial::monomial(std::move(c), xe, ve);
  return along_v ? VectorField({}, p) : VectorField(p, {});
}

const Exponent k0 = Exponent::constant(0);
const Exponent k1 = Exponent::constant(1);

}  // namespace

std::vector<NamedField> emden_v_basis() {
  return {
      {"X1", field(1, k1, k0, true)},               // x d/dv
      {"X2", field(1, Exponent::n(), k0, true)},    // x^n d/dv
      {"X3", field(1, k0, k1, false)},              // v d/dx
      {"X4", field(1, k0, k1, true)},               // v d/dv
      {"X5", field(1, k1, k0, false)},              // x d/dx
  };
}

std::vector<NamedField> emden_w_basis() {
  return {
      {"Y1", field(1, k0, k1, true)},   // v d/dv
      {"Y2", field(1, k1, k0, true)},   // x d/dv
      {"Y3", field(1, k1, k0, false)},  // x d/dx
  };
}

std::vector<NamedField> instantiate(const std::vector<NamedField>& basis, const Rational& n) {
  std::vector<NamedField> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back({b.name, b.field.instantiate(n)});
  return out;
}

// ---------------------------------------------------------------- linear algebra

namespace {

using Key = std::tuple<int, Powers>;  // component (0 = d/dx, 1 = d/dv), exponents

std::map<Key, NPoly> coordinates(const VectorField& f) {
  std::map<Key, NPoly> out;
  for (const auto& [p, c] : f.x_component().terms()) out.emplace(Key{0, p}, c);
  for (const auto& [p, c] : f.v_component().terms()) out.emplace(Key{1, p}, c);
  return out;
}

/// Column-oriented elimination. Each column is one field's coordinate vector;
/// returns reduced columns plus the combination that produced each of them.
struct Eliminated {
  std::vector<std::map<Key, NPoly>> columns;  // reduced
  std::vector<std::vector<NPoly>> combos;     // columns[i] = sum_j combos[i][j] * original_j
  std::vector<std::optional<Key>> pivot;      // pivot key of reduced column i, if nonzero
};

Eliminated eliminate(const std::vector<VectorField>& fields) {
  Eliminated e;
  const std::size_t k = fields.size();
  for (std::size_t i = 0; i < k; ++i) {
    auto col = coordinates(fields[i]);
    std::vector<NPoly> combo(k);
    combo[i] = NPoly(1);
    for (std::size_t j = 0; j < i; ++j) {
      if (!e.pivot[j]) continue;
      const auto it = col.find(*e.pivot[j]);
      if (it == col.end()) continue;
      const NPoly factor = it->second.divided_by(e.columns[j].at(*e.pivot[j]).constant_term());
      for (const auto& [key, c] : e.columns[j]) {
        NPoly& slot = col[key];
        slot = slot - factor * c;
      }
      for (std::size_t m = 0; m < k; ++m) combo[m] = combo[m] - factor * e.combos[j][m];
      std::erase_if(col, [](const auto& kv) { return kv.second.is_zero(); });
    }
    std::optional<Key> piv;
    for (const auto& [key, c] : col) {
      if (c.is_constant()) {
        piv = key;
        break;
      }
    }
    if (!piv && !col.empty())
      throw InputError("basis element " + std::to_string(i + 1) +
                       " has only n-dependent coefficients after elimination; rank is not decidable exactly");
    e.columns.push_back(std::move(col));
    e.combos.push_back(std::move(combo));
    e.pivot.push_back(piv);
  }
  return e;
}

}  // namespace

std::size_t rank(const std::vector<VectorField>& fields) {
  const Eliminated e = eliminate(fields);
  std::size_t r = 0;
  for (const auto& p : e.pivot) r += p.has_value();
  return r;
}

Decomposition decompose(const VectorField& f, const std::vector<VectorField>& basis) {
  // The target is eliminated last; its pivot (if any) exposes what is not spanned.
  const Eliminated e = [&] {
    Eliminated base = eliminate(basis);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (!base.pivot[i]) throw InputError("basis is linearly dependent (element " + std::to_string(i + 1) + ")");
    return base;
  }();
  auto col = coordinates(f);
  const std::size_t k = basis.size();
  std::vector<NPoly> coeff(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto it = col.find(*e.pivot[j]);
    if (it == col.end()) continue;
    const NPoly factor = it->second.divided_by(e.columns[j].at(*e.pivot[j]).constant_term());
    for (const auto& [key, c] : e.columns[j]) {
      NPoly& slot = col[key];
      slot = slot - factor * c;
    }
    std::erase_if(col, [](const auto& kv) { return kv.second.is_zero(); });
    for (std::size_t m = 0; m < k; ++m) coeff[m] = coeff[m] + factor * e.combos[j][m];
  }
  Decomposition d;
  d.coefficients = coeff;
  VectorField reconstructed;
  for (std::size_t m = 0; m < k; ++m) reconstructed = reconstructed + basis[m].scaled(coeff[m]);
  d.residual = f - reconstructed;
  d.in_span = d.residual.is_zero();
  return d;
}

std::string render_combination(const std::vector<NPoly>& coefficients, const std::vector<NamedField>& basis) {
  std::string out;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const NPoly& c = coefficients[i];
    if (c.is_zero()) continue;
    std::string s = c.str();
    bool negative = false;
    if (c.is_constant() && s[0] == '-') {
      negative = true;
      s.erase(0, 1);
    }
    std::string body = s == "1" ? basis[i].name : (c.is_constant() || s.find(' ') == std::string::npos ? s + " " : "(" + s + ") ") + basis[i].name;
    if (out.empty())
      out = (negative ? "-" : "") + body;
    else
      out += (negative ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

SchemeReport verify_scheme(const std::vector<NamedField>& w, const std::vector<NamedField>& v) {
  std::vector<VectorField> wf, vfields;
  for (const auto& b : w) wf.push_back(b.field);
  for (const auto& b : v) vfields.push_back(b.field);
  if (rank(wf) != wf.size()) throw InputError("W basis is linearly dependent");
  if (rank(vfields) != vfields.size()) throw InputError("V basis is linearly dependent");

  SchemeReport report;
  auto record = [&](BracketRelation::Kind kind, std::string lhs, const VectorField& value,
                    const std::vector<VectorField>& target, const std::vector<NamedField>& names) {
    const Decomposition d = decompose(value, target);
    BracketRelation rel{kind, std::move(lhs), value, d.in_span, d.coefficients, ""};
    rel.rendered = d.in_span ? render_combination(d.coefficients, names) : "not in span, residual " + d.residual.str();
    if (!d.in_span && !report.failure) report.failure = rel.lhs + " = " + value.str() + " is not in the target span";
    report.relations.push_back(std::move(rel));
  };

  for (const auto& y : w) record(BracketRelation::Kind::WInV, y.name, y.field, vfields, v);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      record(BracketRelation::Kind::WW, "[" + w[i].name + "," + w[j].name + "]", bracket(w[i].field, w[j].field), wf,
             w);
  for (const auto& y : w)
    for (const auto& x : v)
      record(BracketRelation::Kind::WV, "[" + y.name + "," + x.name + "]", bracket(y.field, x.field), vfields, v);

  report.ok = !report.failure.has_value();
  return report;
}

}  // namespace emden::vf
