#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emden/rational.hpp"

namespace emden::vf {

/// Coefficient scalar: exact rational by default. A real-valued coefficient is
/// admitted but marks the result inexact; inexact equality uses kRealTolerance.
class Scalar {
 public:
  static constexpr double kRealTolerance = 1e-12;

  Scalar() = default;
  Scalar(Rational q) : exact_(q), approx_(q.to_double()) {}  // NOLINT(implicit)
  Scalar(std::int64_t k) : Scalar(Rational(k)) {}              // NOLINT(implicit)
  static Scalar real(double r);

  bool is_exact() const { return is_exact_; }
  const Rational& exact() const;
  double to_double() const { return approx_; }
  bool is_zero() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

  std::string str() const;

 private:
  Rational exact_;
  double approx_ = 0.0;
  bool is_exact_ = true;
};

/// Polynomial in the symbolic exponent n with Scalar coefficients; index = degree.
class NPoly {
 public:
  NPoly() = default;
  NPoly(Scalar c);                          // NOLINT(implicit)
  NPoly(std::int64_t c) : NPoly(Scalar(c)) {}  // NOLINT(implicit)
  static NPoly n();

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.size() <= 1; }
  Scalar constant_term() const { return terms_.empty() ? Scalar() : terms_[0]; }
  std::size_t degree() const { return terms_.empty() ? 0 : terms_.size() - 1; }
  const std::vector<Scalar>& coefficients() const { return terms_; }
  bool is_exact() const;

  Scalar at(const Scalar& n_value) const;

  friend NPoly operator+(const NPoly& a, const NPoly& b);
  friend NPoly operator-(const NPoly& a, const NPoly& b);
  friend NPoly operator*(const NPoly& a, const NPoly& b);
  NPoly operator-() const;
  /// Division by a nonzero constant polynomial.
  NPoly divided_by(const Scalar& s) const;
  friend bool operator==(const NPoly& a, const NPoly& b) { return (a - b).is_zero(); }

  std::string str() const;

 private:
  void trim();
  std::vector<Scalar> terms_;
};

/// Exponent c0 + c1*n, affine in the symbolic n.
struct Exponent {
  Rational c0;
  Rational c1;

  static Exponent constant(Rational c) { return {c, Rational(0)}; }
  static Exponent n() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  NPoly as_poly() const;
  friend Exponent operator+(const Exponent& a, const Exponent& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
  friend Exponent operator-(const Exponent& a, const Exponent& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
  friend bool operator==(const Exponent&, const Exponent&) = default;
  friend auto operator<=>(const Exponent& a, const Exponent& b) {
    if (auto c = a.c1 <=> b.c1; c != 0) return c;
    return a.c0 <=> b.c0;
  }
  std::string str() const;
};

/// Exponent pair (x^a v^b). Ordered lexicographically so sums have a canonical form.
struct Powers {
  Exponent x;
  Exponent v;
  friend bool operator==(const Powers&, const Powers&) = default;
  friend auto operator<=>(const Powers& a, const Powers& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.v <=> b.v;
  }
};

/// Sum of monomials c * x^a * v^b. Zero coefficients are never stored and like
/// terms are merged, so structural equality is mathematical equality.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial monomial(NPoly coefficient, Exponent x_exp, Exponent v_exp);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Powers, NPoly>& terms() const { return terms_; }

  void add_term(const Powers& p, const NPoly& c);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const NPoly& c) const;
  Polynomial d_dx() const;
  Polynomial d_dv() const;
  Polynomial instantiate(const Rational& n) const;
  double evaluate(double x, double v, double n) const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string str() const;

 private:
  std::map<Powers, NPoly> terms_;
};

/// Planar vector field X = P(x,v) d/dx + Q(x,v) d/dv with monomial coefficients.
class VectorField {
 public:
  VectorField() = default;
  VectorField(Polynomial x_component, Polynomial v_component)
      : x_(std::move(x_component)), v_(std::move(v_component)) {}

  const Polynomial& x_component() const { return x_; }
  const Polynomial& v_component() const { return v_; }
  bool is_zero() const { return x_.is_zero() && v_.is_zero(); }

  /// Directional derivative X(f).
  Polynomial apply(const Polynomial& f) const;
  VectorField scaled(const NPoly& c) const { return {x_.scaled(c), v_.scaled(c)}; }
  VectorField instantiate(const Rational& n) const { return {x_.instantiate(n), v_.instantiate(n)}; }
  bool is_exact() const;

  friend VectorField operator+(const VectorField& a, const VectorField& b) { return {a.x_ + b.x_, a.v_ + b.v_}; }
  friend VectorField operator-(const VectorField& a, const VectorField& b) { return {a.x_ - b.x_, a.v_ - b.v_}; }
  VectorField operator-() const { return {Polynomial() - x_, Polynomial() - v_}; }
  friend bool operator==(const VectorField&, const VectorField&) = default;

  /// e.g. "v d/dx + x^n d/dv"
  std::string str() const;

 private:
  Polynomial x_;
  Polynomial v_;
};

VectorField bracket(const VectorField& a, const VectorField& b);

struct NamedField {
  std::string name;
  VectorField field;
};

/// The five generators of V_Emd and the three of W_Emd, with symbolic n.
std::vector<NamedField> emden_v_basis();
std::vector<NamedField> emden_w_basis();
std::vector<NamedField> instantiate(const std::vector<NamedField>& basis, const Rational& n);

struct Decomposition {
  bool in_span = false;
  std::vector<NPoly> coefficients;  // one per basis element; meaningful when in_span
  VectorField residual;             // F - sum c_i B_i; zero iff in_span
};

/// Exact rank of a family of fields, by elimination over the coefficient matrix
/// indexed by (component, x-exponent, v-exponent). Pivots must be constant in
/// n (true for every basis built from monomials with numeric coefficients);
/// throws InputError otherwise.
std::size_t rank(const std::vector<VectorField>& fields);

/// Express `f` in `basis`. Throws InputError if the basis is linearly dependent.
Decomposition decompose(const VectorField& f, const std::vector<VectorField>& basis);

struct BracketRelation {
  enum class Kind { WInV, WW, WV };
  Kind kind;
  std::string lhs;  // e.g. "[Y2,X3]"
  VectorField value;
  bool in_span = false;
  std::vector<NPoly> structure_constants;  // coordinates in the target basis
  std::string rendered;                    // e.g. "X5 - X4"
};

struct SchemeReport {
  bool ok = false;
  std::vector<BracketRelation> relations;
  std::optional<std::string> failure;  // first offending relation
};

/// Check W subset of V, [W,W] subset of W and [W,V] subset of V, recording structure
/// constants. Throws InputError if either basis is linearly dependent.
SchemeReport verify_scheme(const std::vector<NamedField>& w, const std::vector<NamedField>& v);

/// Render sum c_i name_i, e.g. "X5 - X4", "n X2", "0".
std::string render_combination(const std::vector<NPoly>& coefficients, const std::vector<NamedField>& basis);

}  // namespace emden::vf
