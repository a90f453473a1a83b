#include "emden/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "emden/format.hpp"
#include "emden/kernels.hpp"

namespace emden::gauge {

namespace {

double power(double x, double n) {
  if (x < 0.0 && n != std::floor(n)) throw DomainError("x^n with x=" + fmt(x) + " < 0 and non-integer n");
  return std::pow(x, n);
}

Jet jet_of(const SmoothFn& f, double t) { return {f.value(t), f.first(t), f.second(t)}; }

template <class F>
SmoothFn smooth_from_jet(F f, const std::string& label) {
  auto shared = std::make_shared<F>(std::move(f));
  return SmoothFn{TimeFn([shared](double t) { return (*shared)(t).v; }, label),
                  TimeFn([shared](double t) { return (*shared)(t).d1; }, "d/dt " + label),
                  TimeFn([shared](double t) { return (*shared)(t).d2; }, "d2/dt2 " + label)};
}

/// Value and first derivative known; the second by central differences of the first.
SmoothFn with_fd_second(TimeFn value, TimeFn first) {
  TimeFn second(
      [first](double t) {
        const double h = 1e-5 * std::max(1.0, std::abs(t));
        return (first(t + h) - first(t - h)) / (2 * h);
      },
      "fd d/dt " + first.label());
  return SmoothFn{std::move(value), std::move(first), std::move(second)};
}

double rel_dev(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

ConditionReport constant_on_grid(const std::vector<double>& ts, const std::vector<double>& values, double rel_tol) {
  ConditionReport r;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  r.K = mean;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    r.samples.emplace_back(ts[i], values[i]);
    r.variation = std::max(r.variation, std::abs(values[i] - mean) / std::max(std::abs(mean), 1e-300));
  }
  if (mean == 0.0) r.variation = *std::max_element(values.begin(), values.end()) == 0.0 ? 0.0 : INFINITY;
  r.holds = r.variation <= rel_tol;
  return r;
}

}  // namespace

void Interval::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1) throw InputError("interval must have finite, distinct ends");
}

void Interval::check_avoids(const std::vector<double>& singular_points) const {
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  for (double s : singular_points)
    if (s >= lo && s <= hi)
      throw InputError("interval [" + fmt(t0) + ", " + fmt(t1) + "] contains the singular point " + fmt(s));
}

void EmdenProblem::validate() const {
  if (n == 1.0) throw InputError("n = 1 is the linear case and is not supported");
  if (!std::isfinite(n)) throw InputError("n must be finite");
}

void GeneralizedProblem::validate() const {
  if (n == 1.0) throw InputError("n = 1 is the linear case and is not supported");
  if (!std::isfinite(n)) throw InputError("n must be finite");
}

SchemeSystem SchemeSystem::from(const EmdenProblem& p) {
  p.validate();
  return {TimeFn::constant(0.0), TimeFn::constant(1.0), p.a, TimeFn::constant(0.0), p.b, p.n};
}

SchemeSystem SchemeSystem::from(const GeneralizedProblem& p) {
  p.validate();
  return {TimeFn::constant(0.0), TimeFn::constant(1.0), -1.0 * p.p, -1.0 * p.q, p.r, p.n};
}

std::array<double, 5> SchemeSystem::coefficients(double t) const { return {A(t), B(t), C(t), D(t), E(t)}; }

ode::Rhs<2> SchemeSystem::rhs() const {
  return [s = *this](double t, const ode::State<2>& z) {
    const double x = z[0], v = z[1];
    return ode::State<2>{s.A(t) * x + s.B(t) * v, s.C(t) * v + s.D(t) * x + s.E(t) * power(x, s.n)};
  };
}

GaugeTransform GaugeTransform::identity() {
  return {SmoothFn::constant(0.0), SmoothFn::constant(1.0), SmoothFn::constant(1.0)};
}

void GaugeTransform::check_positive(const Interval& iv, std::size_t samples) const {
  for (double t : ode::linspace(iv.t0, iv.t1, samples)) {
    if (!(beta(t) > 0.0)) throw DomainError("gauge beta must be positive; beta(" + fmt(t) + ") = " + fmt(beta(t)));
    if (!(gamma(t) > 0.0))
      throw DomainError("gauge gamma must be positive; gamma(" + fmt(t) + ") = " + fmt(gamma(t)));
  }
}

std::array<double, 2> GaugeTransform::forward(double t, double xp, double vp) const {
  return {gamma(t) * xp, beta(t) * vp + alpha(t) * xp};
}

std::array<double, 2> GaugeTransform::backward(double t, double x, double v) const {
  const double xp = x / gamma(t);
  return {xp, (v - alpha(t) * xp) / beta(t)};
}

GaugeTransform GaugeTransform::inverse() const {
  const GaugeTransform g = *this;
  return {smooth_from_jet([g](double t) { return -jet_of(g.alpha, t) / (jet_of(g.beta, t) * jet_of(g.gamma, t)); },
                          "-alpha/(beta gamma)"),
          smooth_from_jet([g](double t) { return 1.0 / jet_of(g.beta, t); }, "1/beta"),
          smooth_from_jet([g](double t) { return 1.0 / jet_of(g.gamma, t); }, "1/gamma")};
}

SchemeSystem push_system(const SchemeSystem& s, const GaugeTransform& g, const Interval& iv) {
  g.check_positive(iv);
  auto nonzero = [](double d, const char* what, double t) {
    if (d == 0.0) throw DomainError(std::string(what) + " vanishes at t=" + fmt(t));
    return d;
  };
  SchemeSystem out;
  out.n = s.n;
  out.A = TimeFn(
      [s, g, nonzero](double t) {
        const double ga = nonzero(g.gamma(t), "gamma", t);
        return s.A(t) + s.B(t) * g.alpha(t) / ga - g.gamma.first(t) / ga;
      },
      "A'");
  out.B = TimeFn([s, g, nonzero](double t) { return s.B(t) * g.beta(t) / nonzero(g.gamma(t), "gamma", t); }, "B'");
  out.C = TimeFn(
      [s, g, nonzero](double t) {
        const double be = nonzero(g.beta(t), "beta", t), ga = nonzero(g.gamma(t), "gamma", t);
        return s.C(t) - g.beta.first(t) / be - g.alpha(t) * s.B(t) / ga;
      },
      "C'");
  // alpha-free form: the alpha-dot/alpha singularity of the textbook expression cancels.
  const TimeFn a_new = out.A;
  out.D = TimeFn(
      [s, g, a_new, nonzero](double t) {
        const double al = g.alpha(t);
        return (s.C(t) * al + s.D(t) * g.gamma(t) - g.alpha.first(t) - al * a_new(t)) /
               nonzero(g.beta(t), "beta", t);
      },
      "D'");
  out.E = TimeFn(
      [s, g, nonzero](double t) { return s.E(t) * power(g.gamma(t), s.n) / nonzero(g.beta(t), "beta", t); }, "E'");
  return out;
}

GstarReport verify_gstar(const SchemeSystem& sys, const GaugeTransform& g, std::array<double, 2> z0,
                         const Interval& iv, const ode::IntegratorConfig& cfg, std::size_t samples) {
  iv.validate();
  const auto ts = ode::linspace(iv.t0, iv.t1, samples);
  const SchemeSystem pushed = push_system(sys, g, iv);
  const auto original = ode::integrate<2>(sys.rhs(), iv.t0, {z0[0], z0[1]}, iv.t1, cfg, ts);
  const auto mapped0 = g.backward(iv.t0, z0[0], z0[1]);
  const auto transformed = ode::integrate<2>(pushed.rhs(), iv.t0, {mapped0[0], mapped0[1]}, iv.t1, cfg, ts);

  std::vector<double> gap(ts.size()), size(ts.size());
  kernels::detail::for_each_index(ts.size(), kernels::Exec::Parallel, [&](std::size_t i) {
    const auto& z = original.states()[i];
    const auto m = g.backward(ts[i], z[0], z[1]);
    const auto& w = transformed.states()[i];
    gap[i] = std::max(std::abs(m[0] - w[0]), std::abs(m[1] - w[1]));
    size[i] = std::max(std::abs(m[0]), std::abs(m[1]));
  });
  GstarReport r;
  r.samples = ts.size();
  r.discrepancy = kernels::max_abs(gap).value;
  r.scale = std::max(1.0, kernels::max_abs(size).value);
  r.threshold = 100.0 * cfg.rel_tol * r.scale;
  r.pass = r.discrepancy < r.threshold;
  return r;
}

ode::Rhs<2> ReducedLieSystem::rhs() const {
  return [s = *this](double t, const ode::State<2>& z) {
    const double f = s.f(t);
    return ode::State<2>{f * (s.c11 * z[0] + s.c12 * z[1]),
                         f * (s.c21 * z[1] + s.cx * z[0] + s.c22 * power(z[0], s.n))};
  };
}

ode::Rhs<2> ReducedLieSystem::autonomous_rhs() const {
  return [s = *this](double, const ode::State<2>& z) {
    return ode::State<2>{s.c11 * z[0] + s.c12 * z[1], s.c21 * z[1] + s.cx * z[0] + s.c22 * power(z[0], s.n)};
  };
}

Reduction reduce_via_particular_solution(const EmdenProblem& prob, const SmoothFn& xp, const Interval& iv,
                                         const ReductionTolerances& tol) {
  prob.validate();
  iv.validate();
  iv.check_avoids(prob.singular_points);
  const auto ts = ode::linspace(iv.t0, iv.t1, tol.samples);
  const double n = prob.n;

  struct Row {
    double residual, intcond, xdot, x, mismatch;
  };
  std::vector<Row> rows(ts.size());
  kernels::detail::for_each_index(ts.size(), kernels::Exec::Parallel, [&](std::size_t i) {
    const double t = ts[i];
    const double x = xp(t), xd = xp.first(t), xdd = xp.second(t);
    const double a = prob.a(t), b = prob.b(t);
    const double bx = b * power(x, n);
    Row row{};
    row.residual = std::abs(xdd - a * xd - bx) / std::max({1.0, std::abs(xdd), std::abs(a * xd), std::abs(bx)});
    row.intcond = rel_dev(xd * xd, -b * power(x, n + 1));
    row.xdot = xd;
    row.x = x;
    if (xd != 0.0 && x != 0.0) {
      const double f = -xd / x;
      const double funo = -a + xdd / xd;
      const double fdos = bx / xd;
      row.mismatch = std::max(rel_dev(funo, f), rel_dev(fdos, f));
    } else {
      row.mismatch = INFINITY;
    }
    rows[i] = row;
  });

  Reduction red;
  red.interval = iv;
  double worst_res = 0, worst_ic = 0, worst_mis = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Row& r = rows[i];
    if (!(r.x > 0.0)) throw ConditionError("particular solution must be positive; x_p(" + fmt(ts[i]) + ") = " + fmt(r.x));
    if (r.xdot == 0.0) throw ConditionError("xdot_p vanishes at t=" + fmt(ts[i]));
    if (!(r.xdot < 0.0))
      throw ConditionError("beta = -xdot_p must be positive; xdot_p(" + fmt(ts[i]) + ") = " + fmt(r.xdot));
    worst_res = std::max(worst_res, r.residual);
    worst_ic = std::max(worst_ic, r.intcond);
    worst_mis = std::max(worst_mis, r.mismatch);
  }
  red.checks = {{"ode_residual", worst_res}, {"intcond2_rel_error", worst_ic}, {"funo_fdos_mismatch", worst_mis}};
  if (worst_res > tol.residual)
    throw ConditionError("x_p does not solve the equation: residual " + fmt(worst_res, 6));
  if (worst_ic > tol.intcond)
    throw ConditionError("IntCond2 xdot_p^2 = x_p^(n+1) fails: relative error " + fmt(worst_ic, 6));
  if (worst_mis > tol.consistency)
    throw ConditionError("the two expressions for f(t) disagree: relative mismatch " + fmt(worst_mis, 6));

  const SmoothFn beta = with_fd_second(-1.0 * xp.first, -1.0 * xp.second);
  red.gauge = {SmoothFn::constant(0.0), beta, xp};
  red.system.f = TimeFn([xp](double t) { return -xp.first(t) / xp(t); }, "-xdot_p/x_p");
  red.system.c11 = 1;
  red.system.c12 = 1;
  red.system.c21 = -1;
  red.system.c22 = -1;
  red.system.cx = 0;
  red.system.n = n;
  return red;
}

double NestedIntegrals::E(double t) const { return std::exp(A(t)); }

NestedIntegrals nested_integrals(const TimeFn& a, const Interval& iv, double inner_lower,
                                 std::optional<double> outer_lower) {
  const double lo = std::min({iv.t0, iv.t1, inner_lower, outer_lower.value_or(inner_lower)});
  const double hi = std::max({iv.t0, iv.t1, inner_lower, outer_lower.value_or(inner_lower)});
  NestedIntegrals out{quad::Antiderivative(a, inner_lower, lo, hi), std::nullopt};
  if (outer_lower) {
    const quad::Antiderivative A = out.A;
    const TimeFn E([A](double t) { return std::exp(A(t)); }, "exp(int a)");
    out.G.emplace(E, *outer_lower, lo, hi);
  }
  return out;
}

ConditionalReduction reduce_exp_gauge(const EmdenProblem& prob, const Interval& iv, double inner_lower, double rel_tol,
                            std::size_t samples) {
  prob.validate();
  iv.validate();
  iv.check_avoids(prob.singular_points);
  const NestedIntegrals I = nested_integrals(prob.a, iv, inner_lower, std::nullopt);
  const auto ts = ode::linspace(iv.t0, iv.t1, samples);
  const auto values = kernels::sample(ts, [&](double t) { return prob.b(t) * std::exp(-2.0 * I.A(t)); });
  ConditionalReduction out{constant_on_grid(ts, values, rel_tol), std::nullopt};
  if (!out.condition.holds) return out;

  const TimeFn E([I](double t) { return I.E(t); }, "exp(int a)");
  const TimeFn a = prob.a;
  const TimeFn Ed([I, a](double t) { return a(t) * I.E(t); }, "a exp(int a)");
  Reduction red;
  red.interval = iv;
  red.gauge = {SmoothFn::constant(0.0), with_fd_second(E, Ed), SmoothFn::constant(1.0)};
  red.system.f = E;
  red.system.c11 = 0;
  red.system.c12 = 1;
  red.system.c21 = 0;
  red.system.c22 = out.condition.K;
  red.system.cx = 0;
  red.system.n = prob.n;
  red.checks = {{"condition_variation", out.condition.variation}};
  out.reduction = std::move(red);
  return out;
}

ConditionalReduction reduce_sqrt_gauge(const EmdenProblem& prob, const Interval& iv, double inner_lower, double outer_lower,
                             double rel_tol, std::size_t samples) {
  prob.validate();
  iv.validate();
  iv.check_avoids(prob.singular_points);
  const NestedIntegrals I = nested_integrals(prob.a, iv, inner_lower, outer_lower);
  const auto ts = ode::linspace(iv.t0, iv.t1, samples);
  const double expo = (prob.n + 3.0) / 2.0;
  const auto values = kernels::sample(ts, [&](double t) {
    const double G = (*I.G)(t);
    if (G < 0.0 || (G == 0.0 && expo < 0.0))
      throw DomainError("nested antiderivative int exp(int a) is " + std::string(G < 0.0 ? "negative" : "zero") +
                        " at t=" + fmt(t) + "; choose its lower limit below the interval");
    // n = -3: the power is identically one and the condition degenerates to b exp(-2 int a) = K.
    const double factor = expo == 0.0 ? 1.0 : std::pow(2.0 * G, expo);
    return prob.b(t) * std::exp(-2.0 * I.A(t)) * factor;
  });
  ConditionalReduction out{constant_on_grid(ts, values, rel_tol), std::nullopt};
  if (!out.condition.holds) return out;

  const TimeFn a = prob.a;
  auto gamma_jet = [I, a](double t) {
    const double E = I.E(t), G = (*I.G)(t);
    const double g = std::sqrt(2.0 * G);
    return Jet{g, E / g, a(t) * E / g - E * E / (g * g * g)};
  };
  const SmoothFn gamma = smooth_from_jet(gamma_jet, "sqrt(2 int exp(int a))");
  Reduction red;
  red.interval = iv;
  red.gauge = {SmoothFn::constant(0.0), with_fd_second(gamma.first, gamma.second), gamma};
  red.system.f = TimeFn([I](double t) { return I.E(t) / (2.0 * (*I.G)(t)); }, "exp(int a)/(2 int exp(int a))");
  red.system.c11 = -1;
  red.system.c12 = 1;
  red.system.c21 = 1;
  red.system.c22 = out.condition.K;
  red.system.cx = 0;
  red.system.n = prob.n;
  red.checks = {{"condition_variation", out.condition.variation}};
  out.reduction = std::move(red);
  return out;
}

Reparametrization reparametrize(const ReducedLieSystem& sys, double t0, const Interval& iv) {
  iv.validate();
  const double lo = std::min({iv.t0, iv.t1, t0}), hi = std::max({iv.t0, iv.t1, t0});
  std::vector<double> ts = ode::linspace(lo, hi, 200);
  const double s0 = sys.f(ts.front());
  for (double t : ts) {
    const double f = sys.f(t);
    if (f == 0.0 || (f > 0.0) != (s0 > 0.0)) throw DomainError("f changes sign or vanishes near t=" + fmt(t));
  }
  Reparametrization out{quad::Antiderivative(sys.f, t0, lo, hi), sys.autonomous_rhs()};
  const auto& nodes = out.tau.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double d = out.tau(nodes[i]) - out.tau(nodes[i - 1]);
    if (!((d > 0.0) == (s0 > 0.0)) || d == 0.0)
      throw DomainError("tau is not strictly monotone between t=" + fmt(nodes[i - 1]) + " and t=" + fmt(nodes[i]));
  }
  return out;
}

KummerLiouville kummer_liouville(const GeneralizedProblem& prob, std::array<double, 2> gamma_init, const Interval& iv,
                                 const ode::IntegratorConfig& cfg) {
  prob.validate();
  iv.validate();
  iv.check_avoids(prob.singular_points);
  if (!(gamma_init[0] > 0.0)) throw InputError("gamma(t0) must be positive");
  const TimeFn p = prob.p, q = prob.q;
  const ode::Rhs<2> linear = [p, q](double t, const ode::State<2>& y) {
    return ode::State<2>{y[1], -q(t) * y[0] - p(t) * y[1]};
  };
  auto sol = ode::integrate<2>(linear, iv.t0, {gamma_init[0], gamma_init[1]}, iv.t1, cfg);
  for (std::size_t i = 0; i < sol.times().size(); ++i)
    if (!(sol.states()[i][0] > 0.0))
      throw DomainError("gamma reaches zero near t=" + fmt(sol.times()[i]) +
                        "; the reduction is valid only up to its first zero");
  for (double t : ode::linspace(iv.t0, iv.t1, 1000))
    if (!(sol.at(t)[0] > 0.0))
      throw DomainError("gamma reaches zero near t=" + fmt(t) + "; the reduction is valid only up to its first zero");

  auto shared = std::make_shared<const ode::Solution<2>>(sol);
  const SmoothFn gamma{TimeFn([shared](double t) { return shared->at(t)[0]; }, "gamma"),
                       TimeFn([shared](double t) { return shared->at(t)[1]; }, "gammadot"),
                       TimeFn(
                           [shared, p, q](double t) {
                             const auto y = shared->at(t);
                             return -q(t) * y[0] - p(t) * y[1];
                           },
                           "gammaddot")};
  const quad::Antiderivative P(p, iv.t0, std::min(iv.t0, iv.t1), std::max(iv.t0, iv.t1));
  const double g0 = gamma_init[0];
  const TimeFn beta([gamma, P, g0](double t) { return g0 * g0 * std::exp(-P(t)) / gamma(t); }, "beta");
  const TimeFn beta_dot(
      [gamma, beta, p](double t) {
        const double b = beta(t);
        return -p(t) * b - gamma.first(t) * b / gamma(t);
      },
      "betadot");

  KummerLiouville kl{{with_fd_second(gamma.first, gamma.second), with_fd_second(beta, beta_dot), gamma},
                     sol,
                     quad::Antiderivative(beta / gamma.value, iv.t0, std::min(iv.t0, iv.t1), std::max(iv.t0, iv.t1)),
                     TimeFn(),
                     iv};
  const TimeFn r = prob.r;
  const double n = prob.n;
  kl.canonical = TimeFn(
      [r, gamma, beta, n](double t) {
        const double b = beta(t);
        return r(t) * std::pow(gamma(t), n + 1.0) / (b * b);
      },
      "r gamma^(n+1)/beta^2");
  return kl;
}

CanonicalCheck verify_canonical(const GeneralizedProblem& prob, const KummerLiouville& kl, std::array<double, 2> z0,
                                double tol, std::size_t samples) {
  ode::IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const Interval iv = kl.interval;
  const auto traj =
      std::make_shared<const ode::Trajectory>(ode::integrate<2>(SchemeSystem::from(prob).rhs(), iv.t0, {z0[0], z0[1]}, iv.t1, cfg));
  const GaugeTransform& g = kl.gauge;
  auto primed = [&](double t) { return g.backward(t, traj->at(t)[0], traj->at(t)[1]); };

  const double span = iv.t1 - iv.t0;
  const double h = 1e-3 * std::abs(span) / 4.0;
  const auto ts = ode::linspace(iv.t0 + 2.5 * h * (span > 0 ? 1 : -1), iv.t1 - 2.5 * h * (span > 0 ? 1 : -1), samples);
  std::vector<double> res(ts.size()), first(ts.size());
  kernels::detail::for_each_index(ts.size(), kernels::Exec::Parallel, [&](std::size_t i) {
    const double t = ts[i];
    auto d = [&](int k) {
      const auto m2 = primed(t - 2 * h)[k], m1 = primed(t - h)[k], p1 = primed(t + h)[k], p2 = primed(t + 2 * h)[k];
      return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
    };
    const auto z = primed(t);
    const double dtau_dt = g.beta(t) / g.gamma(t);
    const double lhs = d(1) / dtau_dt;
    const double rhs = kl.canonical(t) * power(z[0], prob.n);
    res[i] = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    first[i] = std::abs(d(0) / dtau_dt - z[1]) / std::max(1.0, std::abs(z[1]));
  });
  CanonicalCheck c;
  c.samples = ts.size();
  c.max_residual = kernels::max_abs(res).value;
  c.max_first_order = kernels::max_abs(first).value;
  c.pass = c.max_residual < tol && c.max_first_order < tol;
  return c;
}

std::string render(const Reduction& r, std::size_t samples) {
  std::string out;
  out += "interval: [" + fmt(r.interval.t0) + ", " + fmt(r.interval.t1) + "]\n";
  out += "reduced system: dx'/dt = f(t) (" + fmt(r.system.c11) + " x' + " + fmt(r.system.c12) +
         " v'), dv'/dt = f(t) (" + fmt(r.system.c21) + " v' + " + fmt(r.system.cx) + " x' + " + fmt(r.system.c22) +
         " x'^n), n = " + fmt(r.system.n) + "\n";
  out += "c11=" + fmt(r.system.c11) + " c12=" + fmt(r.system.c12) + " c21=" + fmt(r.system.c21) +
         " c22=" + fmt(r.system.c22) + " cx=" + fmt(r.system.cx) + "\n";
  out += "samples: t, alpha, beta, gamma, f\n";
  for (double t : ode::linspace(r.interval.t0, r.interval.t1, std::max<std::size_t>(samples, 2)))
    out += "  " + fmt(t) + ", " + fmt(r.gauge.alpha(t)) + ", " + fmt(r.gauge.beta(t)) + ", " + fmt(r.gauge.gamma(t)) +
           ", " + fmt(r.system.f(t)) + "\n";
  for (const auto& [name, value] : r.checks) out += "check " + name + " = " + fmt(value, 6) + "\n";
  return out;
}

}  // namespace emden::gauge
