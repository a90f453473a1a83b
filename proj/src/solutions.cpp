#include "emden/solutions.hpp"

#include <cmath>

#include "emden/format.hpp"
#include "emden/kernels.hpp"

namespace emden::sol {

namespace {

double power(double x, double n) {
  if (x < 0.0 && n != std::floor(n)) throw DomainError("x^n with x=" + fmt(x) + " < 0 and non-integer n");
  return std::pow(x, n);
}

std::vector<double> grid(const gauge::Interval& iv, const ResidualOptions& opt) {
  std::vector<double> ts;
  for (double t : ode::linspace(iv.t0, iv.t1, opt.samples)) {
    bool skip = false;
    for (const auto& [lo, hi] : opt.excluded) skip = skip || (t > lo && t < hi);
    if (!skip) ts.push_back(t);
  }
  if (ts.empty()) throw InputError("residual grid is empty after exclusions");
  return ts;
}

ResidualReport summarize(const std::vector<double>& ts, const std::vector<double>& res, double threshold) {
  ResidualReport r;
  const auto worst = kernels::max_abs(res);
  r.max_abs = worst.value;
  r.worst_t = ts[worst.index];
  r.mean_abs = kernels::mean_abs(res);
  r.samples = ts.size();
  r.threshold = threshold;
  r.pass = r.max_abs < threshold;
  return r;
}

gauge::EmdenProblem problem(const std::string& a, const std::string& b, double n, const expr::Bindings& bind,
                            std::vector<double> singular) {
  return {TimeFn::parse(a, bind), TimeFn::parse(b, bind), n, std::move(singular)};
}

std::string equation_text(const std::string& a, const std::string& b, double n) {
  return "xdd = (" + a + ") xd + (" + b + ") x^" + fmt(n);
}

alg::Monomial mono(Rational w, Rational x, Rational v) { return {w, x, v}; }

Rational exact(double v) { return Rational::from_double(v, 1'000'000); }

}  // namespace

ResidualReport verify_solution(const gauge::EmdenProblem& prob, const SmoothFn& x, const gauge::Interval& iv,
                               const ResidualOptions& opt) {
  prob.validate();
  iv.validate();
  const auto ts = grid(iv, opt);
  const auto res = kernels::sample(ts, [&](double t) {
    return x.second(t) - prob.a(t) * x.first(t) - prob.b(t) * power(x(t), prob.n);
  });
  return summarize(ts, res, opt.threshold);
}

ResidualReport verify_solution(const gauge::GeneralizedProblem& prob, const SmoothFn& x, const gauge::Interval& iv,
                               const ResidualOptions& opt) {
  prob.validate();
  iv.validate();
  const auto ts = grid(iv, opt);
  const auto res = kernels::sample(ts, [&](double t) {
    const double xv = x(t);
    return x.second(t) + prob.p(t) * x.first(t) + prob.q(t) * xv - prob.r(t) * power(xv, prob.n);
  });
  return summarize(ts, res, opt.threshold);
}

double intcond2_error(const SmoothFn& xp, double n, const gauge::Interval& iv, std::size_t samples) {
  const auto ts = ode::linspace(iv.t0, iv.t1, samples);
  const auto err = kernels::sample(ts, [&](double t) {
    const double d = xp.first(t);
    const double lhs = d * d, rhs = power(xp(t), n + 1.0);
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  });
  return kernels::max_abs(err).value;
}

namespace {

void check_intcond2_n(double n) {
  if (n == 1.0 || n == -1.0) throw InputError("IntCond2 family needs n not in {1, -1}");
  if (!std::isfinite(n)) throw InputError("n must be finite");
}

double branch_slope(double n, Branch branch) { return branch == Branch::Literal ? (1.0 - n) / 2.0 : (n - 1.0) / 2.0; }

}  // namespace

SmoothFn intcond2_family(double n, double K, Branch branch) {
  check_intcond2_n(n);
  const double c = branch_slope(n, branch);
  const double e = -2.0 / (n - 1.0);
  const bool integer_exponent = e == std::floor(e);
  auto f = [K, c, e, integer_exponent](auto t) {
    using std::pow;
    const auto base = K + c * t;
    const double b = value_of(base);
    if (b == 0.0 || (b < 0.0 && !integer_exponent))
      throw DomainError("IntCond2 family base K + c t = " + fmt(b) + " is not positive at t=" + fmt(value_of(t)));
    return pow(base, e);
  };
  return SmoothFn::from_generic(f, "(" + fmt(K) + " + " + fmt(c) + "*t)^(" + fmt(e) + ")");
}

gauge::Interval intcond2_interval(double n, double K, Branch branch) {
  check_intcond2_n(n);
  const double c = branch_slope(n, branch);
  // base = K + c t runs from 2 to 0.5 (c < 0) or from 0.5 to 2 (c > 0)
  const double ta = (2.0 - K) / c, tb = (0.5 - K) / c;
  return {std::min(ta, tb), std::max(ta, tb)};
}

CatalogEntry construct_equation(double n, double K, Branch branch) {
  check_intcond2_n(n);
  const double c = branch_slope(n, branch);
  const double sign = branch == Branch::Literal ? 1.0 : -1.0;
  const expr::Bindings bind{{"K", K}, {"c", c}, {"m", sign * (n + 3.0)}, {"e", -2.0 / (n - 1.0)}};
  const std::string a = "m/(2*(K + c*t))";
  CatalogEntry out;
  out.id = "constructed_n" + fmt(n);
  out.problem = problem(a, "-1", n, bind, {-K / c});
  out.xp = intcond2_family(n, K, branch);
  out.parameters = {{"n", n}, {"K", K}, {"c", c}, {"m", sign * (n + 3.0)}};
  out.validity = intcond2_interval(n, K, branch);
  out.intcond2 = true;
  out.equation = equation_text(a, "-1", n);
  out.solution = "(K + c*t)^(-2/(n-1))";
  out.reference = std::string("inverse construction from a solution of xdot^2 = x^(n+1), ") +
                  (branch == Branch::Literal ? "base K + (1-n) t/2" : "time-reversed base K + (n-1) t/2");
  try {
    const alg::PowerLaw pl{alg::AlgebraicScalar(1), Rational(-2) / (exact(n) - Rational(1)), exact(c)};
    out.symbolic = SymbolicForm{pl, exact(n), "K + c t", alg::Expansion()};
  } catch (const Error&) {
    // irrational n: numeric checks only
  }
  return out;
}

CatalogEntry powerlaw_solution(double n, double K1) {
  if (n == 1.0 || n == -3.0) throw InputError("power-law solution needs n not in {1, -3}");
  const double nu = 2.0 / (n - 1.0);
  const double K3 = (n - 1.0) / (n + 3.0);
  const double K2 = std::pow(4.0 / ((n + 3.0) * (n + 3.0)), 1.0 / (n - 1.0));
  const expr::Bindings bind{{"K1", K1}, {"K2", K2}, {"K3", K3}, {"nu", nu}};
  const std::string a = "-1/(K1 + K3*t)";
  CatalogEntry out;
  out.id = "powerlaw_n" + fmt(n);
  out.problem = problem(a, "-1", n, bind, {-K1 / K3});
  out.xp = SmoothFn::parse("K2/(K1 + K3*t)^nu", bind);
  out.parameters = {{"n", n}, {"K1", K1}, {"K2", K2}, {"K3", K3}, {"nu", nu}};
  // w = K1 + K3 t between K1 and 10 K1 (or the mirror image for K3 < 0)
  const double ta = 0.0, tb = 9.0 * K1 / K3;
  out.validity = {std::min(ta, tb), std::max(ta, tb)};
  if (K3 < 0.0) out.validity = {std::min(ta, 0.9 * K1 / -K3), std::max(ta, 0.9 * K1 / -K3)};
  out.intcond2 = true;
  out.equation = equation_text(a, "-1", n);
  out.solution = "K2/(K1 + K3*t)^nu";
  out.reference = "power-law family, nu = 2/(n-1), K3 = (n-1)/(n+3), K2^(n-1) = 4/(n+3)^2 (positive root)";
  try {
    const Rational rn = exact(n);
    const Rational n3 = rn + Rational(3);
    const Rational e1 = (rn + Rational(1)) * Rational(2) / (rn - Rational(1));
    const Rational e2 = n3 / (rn - Rational(1));
    alg::Expansion ref;
    ref.add(alg::AlgebraicScalar(Rational(1) / (rn + Rational(1))), mono(e1, rn + Rational(1), 0));
    ref.add(alg::AlgebraicScalar(Rational(1, 2)), mono(e1, 0, 2));
    ref.add(alg::AlgebraicScalar(Rational(2) / n3), mono(e2, 1, 1));
    const alg::PowerLaw pl{alg::AlgebraicScalar::power(Rational(4) / (n3 * n3), Rational(1) / (rn - Rational(1))),
                           Rational(-2) / (rn - Rational(1)), (rn - Rational(1)) / n3};
    out.symbolic = SymbolicForm{pl, rn, "K1 + K3 t", ref};
  } catch (const Error&) {
  }
  return out;
}

gauge::EmdenProblem lane_emden(double n) { return problem("-2/t", "-1", n, {}, {0.0}); }

std::vector<CatalogEntry> catalog(double K) {
  std::vector<CatalogEntry> out;
  const expr::Bindings bind{{"K", K}};

  auto shifted = [&](const std::string& id, const std::string& a, double n, const std::string& xp,
                     alg::PowerLaw pl, alg::Expansion ref, const std::string& reference) {
    CatalogEntry e;
    e.id = id;
    e.problem = problem(a, "-1", n, bind, {-K});
    e.xp = SmoothFn::parse(xp, bind);
    e.parameters = {{"K", K}};
    e.validity = {0.5, 5.0};
    e.intcond2 = true;
    e.equation = equation_text(a, "-1", n);
    e.solution = xp;
    e.reference = reference;
    e.symbolic = SymbolicForm{pl, Rational(static_cast<std::int64_t>(n)), "t + K", std::move(ref)};
    return e;
  };

  {
    alg::Expansion ref;  // 4/3 t^3 x^6 + 4 t^3 v^2 + 4 t^2 x v
    ref.add(Rational(4, 3), mono(3, 6, 0));
    ref.add(Rational(4), mono(3, 0, 2));
    ref.add(Rational(4), mono(2, 1, 1));
    CatalogEntry e;
    e.id = "lane_emden_n5";
    e.problem = lane_emden(5.0);
    e.xp = SmoothFn::parse("(2*t)^(-1/2)");
    e.validity = {0.5, 10.0};
    e.intcond2 = true;
    e.equation = equation_text("-2/t", "-1", 5);
    e.solution = "(2*t)^(-1/2)";
    e.reference = "Lane-Emden n = 5, singular particular solution; invariant 4/3 t^3 x^6 + 4 t^3 v^2 + 4 t^2 x v";
    e.symbolic = SymbolicForm{{alg::AlgebraicScalar::power(2, Rational(-1, 2)), Rational(-1, 2), Rational(1)},
                              Rational(5), "t", ref};
    out.push_back(std::move(e));
  }
  {
    alg::Expansion ref;  // 1/3 x^3 s^6 + 1/2 v^2 s^6 + 2 x v s^5
    ref.add(Rational(1, 3), mono(6, 3, 0));
    ref.add(Rational(1, 2), mono(6, 0, 2));
    ref.add(Rational(2), mono(5, 1, 1));
    out.push_back(shifted("emden_n2", "-5/(t+K)", 2, "4/(t+K)^2", {alg::AlgebraicScalar(4), Rational(-2), Rational(1)}, ref,
                          "shifted n = 2 equation; invariant 1/3 x^3 s^6 + 1/2 v^2 s^6 + 2 x v s^5, s = t + K"));
  }
  {
    alg::Expansion ref;  // s^(3/2) (10 s v^2 + 5 v x + 2 s x^10)
    ref.add(Rational(10), mono(Rational(5, 2), 0, 2));
    ref.add(Rational(5), mono(Rational(3, 2), 1, 1));
    ref.add(Rational(2), mono(Rational(5, 2), 10, 0));
    out.push_back(shifted("emden_n9", "-3/(2*(t+K))", 9, "1/(sqrt(2)*(t+K)^(1/4))",
                          {alg::AlgebraicScalar::power(2, Rational(-1, 2)), Rational(-1, 4), Rational(1)}, ref,
                          "shifted n = 9 equation; invariant s^(3/2) (10 s v^2 + 5 v x + 2 s x^10), s = t + K"));
  }
  {
    alg::Expansion ref;  // s^(5/3) (12 s v^2 + 8 v x + 3 x^8 s)
    ref.add(Rational(12), mono(Rational(8, 3), 0, 2));
    ref.add(Rational(8), mono(Rational(5, 3), 1, 1));
    ref.add(Rational(3), mono(Rational(8, 3), 8, 0));
    out.push_back(shifted("emden_n7", "-5/(3*(t+K))", 7, "1/(3^(1/3)*(t+K)^(1/3))",
                          {alg::AlgebraicScalar::power(3, Rational(-1, 3)), Rational(-1, 3), Rational(1)}, ref,
                          "shifted n = 7 equation; invariant s^(5/3) (12 s v^2 + 8 v x + 3 x^8 s), s = t + K"));
  }
  {
    CatalogEntry e = powerlaw_solution(3.0, K);
    e.id = "powerlaw_n3";
    e.validity = {0.5, 5.0};
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "lane_emden_n5_regular";
    e.problem = lane_emden(5.0);
    e.xp = SmoothFn::parse("(1+t^2/3)^(-1/2)");
    e.validity = {0.1, 10.0};
    e.equation = equation_text("-2/t", "-1", 5);
    e.solution = "(1+t^2/3)^(-1/2)";
    e.reference = "Lane-Emden n = 5 solution with x(0) = 1, xd(0) = 0; zero level of the n = 5 invariant";
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "lane_emden_n5_kfamily";
    e.problem = lane_emden(5.0);
    e.xp = k_family(2.0);
    e.parameters = {{"K", 2.0}};
    e.validity = {2.0, 10.0};  // one side of the seam at t = sqrt(3)
    e.equation = equation_text("-2/t", "-1", 5);
    e.solution = e.xp.value.label();
    e.reference = "member K = 2 of the family generated by the partial superposition rule from (1+t^2/3)^(-1/2)";
    out.push_back(std::move(e));
  }
  for (const auto& e : out) check_entry(e);
  return out;
}

void check_entry(const CatalogEntry& e) {
  ResidualOptions opt;
  opt.samples = 100;
  opt.threshold = 1e-10;
  const auto r = verify_solution(e.problem, e.xp, e.validity, opt);
  if (!r.pass) throw Error("catalog entry " + e.id + " fails its residual check: " + fmt(r.max_abs, 6));
  if (e.intcond2) {
    const double ic = intcond2_error(e.xp, e.problem.n, e.validity, 100);
    if (ic > 1e-12) throw Error("catalog entry " + e.id + " fails IntCond2: " + fmt(ic, 6));
  }
}

const CatalogEntry& find(const std::vector<CatalogEntry>& entries, const std::string& id) {
  for (const auto& e : entries)
    if (e.id == id) return e;
  std::string known;
  for (const auto& e : entries) known += (known.empty() ? "" : ", ") + e.id;
  throw InputError("unknown catalog entry '" + id + "' (known: " + known + ")");
}

std::string manifest(const std::vector<CatalogEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += "id: " + e.id + "\n";
    out += "  equation: " + e.equation + "\n";
    out += "  solution: x_p(t) = " + e.solution + "\n";
    std::string params;
    for (const auto& [k, v] : e.parameters) params += (params.empty() ? "" : ", ") + k + "=" + fmt(v);
    out += "  parameters: " + (params.empty() ? std::string("none") : params) + "\n";
    out += "  validity: [" + fmt(e.validity.t0) + ", " + fmt(e.validity.t1) + "]\n";
    out += "  intcond2: " + std::string(e.intcond2 ? "yes" : "no") + "\n";
    out += "  reference: " + e.reference + "\n";
  }
  return out;
}

double superpose(double x1, double t, double K) {
  if (!(K >= 0.0)) throw InputError("superposition constant K must be nonnegative");
  if (K == 0.0) return 0.0;
  const double x14 = x1 * x1 * x1 * x1;
  double rad = 1.0 - 4.0 * t * t * x14 / 3.0;
  if (rad < 0.0) {
    if (rad < -1e-12) throw DomainError("superposition rule outside its domain: 4 t^2 x1^4 > 3 at t=" + fmt(t));
    rad = 0.0;
  }
  const double S = std::sqrt(rad);
  const double num = 6.0 * K * x1 * x1 * (1.0 - S + K * K * (1.0 + S));
  const double den = 12.0 * K * K + (1.0 - K * K) * (1.0 - K * K) * 4.0 * t * t * x14;
  return std::sqrt(num / den);
}

SmoothFn k_family(double K) {
  if (!(K >= 0.0)) throw InputError("k_family needs K >= 0");
  if (K == 0.0) return SmoothFn::constant(0.0);
  auto f = [K](auto t) {
    using std::abs;
    using std::sqrt;
    const auto t2 = t * t;
    const auto num = K * (3.0 + t2 - abs(t2 - 3.0) + K * K * (3.0 + t2 + abs(t2 - 3.0)));
    const auto den = (3.0 * K * K + t2) * (3.0 + K * K * t2);
    return std::sqrt(1.5) * sqrt(num / den);
  };
  return SmoothFn::from_generic(f, "sqrt(3/2)*sqrt(K*(3+t^2-abs(t^2-3)+K^2*(3+t^2+abs(t^2-3)))/((3*K^2+t^2)*(3+K^2*t^2))), K=" + fmt(K));
}

SeamReport k_family_seam(double K) {
  if (!(K > 0.0)) throw InputError("k_family_seam needs K > 0");
  const double s = std::sqrt(3.0);
  const Jet t = Jet::variable(s);
  const Jet below = sqrt(3.0 * K / (3.0 + K * K * t * t));  // t < sqrt(3)
  const Jet above = sqrt(3.0 * K / (3.0 * K * K + t * t));  // t > sqrt(3)
  return {std::abs(above.v - below.v), std::abs(above.d1 - below.d1)};
}

double zero_level_integral(double x, double v) { return std::pow(x, 6) / 6.0 + v * v / 2.0 + x * v; }

double zero_level_velocity(double x, int sigma) {
  const double rad = 1.0 - std::pow(x, 4) / 3.0;
  if (rad < 0.0) throw DomainError("no zero-level point with x^4 > 3");
  return x * (-1.0 + (sigma >= 0 ? 1.0 : -1.0) * std::sqrt(rad));
}

int zero_level_branch(double x, double v) {
  if (x == 0.0) throw DomainError("zero-level branch undefined at x = 0");
  return v / x + 1.0 >= 0.0 ? 1 : -1;
}

ode::Rhs<4> coupled_field() {
  return [](double, const ode::State<4>& z) {
    return ode::State<4>{z[0] + z[1], -(z[1] + std::pow(z[0], 5)), z[2] + z[3], -(z[3] + std::pow(z[2], 5))};
  };
}

double third_integral(double x0, double v0, double x1, double v1, double tol) {
  auto on_level = [tol](double x, double v, const char* which) {
    const double I = zero_level_integral(x, v);
    const double scale = std::max({1.0, std::pow(x, 6) / 6.0, v * v / 2.0, std::abs(x * v)});
    if (std::abs(I) > tol * scale)
      throw DomainError(std::string("point ") + which + " is off the zero level set: I = " + fmt(I, 6));
  };
  on_level(x0, v0, "0");
  on_level(x1, v1, "1");
  auto root = [](double x) {
    double rad = 1.0 - std::pow(x, 4) / 3.0;
    if (rad < 0.0) {
      if (rad < -1e-12) throw DomainError("third integral radicand 1 - x^4/3 is negative");
      rad = 0.0;
    }
    return std::sqrt(rad);
  };
  if (x1 == 0.0) throw DomainError("third integral needs x1 != 0");
  return (x0 * x0) / (x1 * x1) * (1.0 + root(x1)) / (1.0 + root(x0));
}

std::string superpose_csv(const TimeFn& x1, double K, const std::vector<double>& ts) {
  const auto x0 = kernels::sample(ts, [&](double t) { return superpose(x1(t), t, K); });
  std::string out = "t,x0\n";
  for (std::size_t i = 0; i < ts.size(); ++i) out += fmt(ts[i]) + "," + fmt(x0[i]) + "\n";
  return out;
}

}  // namespace emden::sol
