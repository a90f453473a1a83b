#include "emden/invariants.hpp"

#include <cmath>

#include "emden/format.hpp"

namespace emden::inv {

namespace {

double power(double x, double n) {
  if (x < 0.0 && n != std::floor(n)) throw DomainError("x^n with x=" + fmt(x) + " < 0 and non-integer n");
  return std::pow(x, n);
}

double log_positive(double x) {
  if (!(x > 0.0)) throw DomainError("log of nonpositive value " + fmt(x));
  return std::log(x);
}

/// x^(n+1)/(n+1), or log x at n = -1.
double potential(double x, double n) { return n == -1.0 ? log_positive(x) : power(x, n + 1.0) / (n + 1.0); }

}  // namespace

Invariant generic_first_integral(double c11, double c12, double c21, double c22, double cx, double n) {
  if (std::abs(c21 + c11) > 1e-14 * std::max(1.0, std::abs(c11)))
    throw ConditionError("first integral needs c21 = -c11 (got c11=" + fmt(c11) + ", c21=" + fmt(c21) +
                         "); the integrating-factor case is not supported");
  if (n == 1.0) throw InputError("n = 1 is the linear case and is not supported");
  return {[=](double, double x, double v) {
            return -c12 * v * v / 2.0 + cx * x * x / 2.0 + c21 * v * x + c22 * potential(x, n);
          },
          "generic",
          {-INFINITY, INFINITY}};
}

Invariant pull_back(const Invariant& primed, const gauge::GaugeTransform& g, const std::string& provenance) {
  return {[primed, g](double t, double x, double v) {
            const auto z = g.backward(t, x, v);
            return primed(t, z[0], z[1]);
          },
          provenance,
          primed.validity};
}

Invariant invariant_from_particular_solution(const gauge::EmdenProblem& prob, const SmoothFn& xp,
                                             const gauge::Interval& iv) {
  gauge::reduce_via_particular_solution(prob, xp, iv);
  const double n = prob.n;
  return {[xp, n](double t, double x, double v) {
            const double p = xp(t), pd = xp.first(t);
            if (pd == 0.0) throw DomainError("xdot_p vanishes at t=" + fmt(t));
            const double lead = n == -1.0 ? log_positive(x / p) : power(x / p, n + 1.0) / (n + 1.0);
            return lead + v * v / (2.0 * pd * pd) - x * v / (p * pd);
          },
          "particular-solution",
          iv};
}

ConditionalInvariant exp_gauge_invariant(const gauge::EmdenProblem& prob, const gauge::Interval& iv, double inner_lower,
                              double rel_tol) {
  auto red = gauge::reduce_exp_gauge(prob, iv, inner_lower, rel_tol);
  ConditionalInvariant out{red.condition, std::nullopt};
  if (!red.reduction) return out;
  const gauge::NestedIntegrals I = gauge::nested_integrals(prob.a, iv, inner_lower, std::nullopt);
  const TimeFn b = prob.b;
  const double n = prob.n;
  out.invariant = Invariant{[I, b, n](double t, double x, double v) {
                              return std::exp(-2.0 * I.A(t)) * (v * v / 2.0 - b(t) * potential(x, n));
                            },
                            "exp-gauge",
                            iv};
  return out;
}

ConditionalInvariant sqrt_gauge_invariant(const gauge::EmdenProblem& prob, const gauge::Interval& iv, double inner_lower,
                               double outer_lower, double rel_tol) {
  auto red = gauge::reduce_sqrt_gauge(prob, iv, inner_lower, outer_lower, rel_tol);
  ConditionalInvariant out{red.condition, std::nullopt};
  if (!red.reduction) return out;
  const auto& r = *red.reduction;
  if (prob.n == -1.0) {
    // The closed form uses x^(n+1)/(n+1); at n = -1 pull the log-form integral back instead.
    const auto& s = r.system;
    out.invariant = pull_back(generic_first_integral(s.c11, s.c12, s.c21, s.c22, s.cx, s.n), r.gauge, "sqrt-gauge");
    out.invariant->validity = iv;
    return out;
  }
  const gauge::NestedIntegrals I = gauge::nested_integrals(prob.a, iv, inner_lower, outer_lower);
  const TimeFn b = prob.b;
  const double n = prob.n;
  out.invariant = Invariant{[I, b, n](double t, double x, double v) {
                              const double A = I.A(t);
                              return (v * v / 2.0 - b(t) * potential(x, n)) * std::exp(-2.0 * A) * (*I.G)(t) -
                                     0.5 * x * v * std::exp(-A);
                            },
                            "sqrt-gauge",
                            iv};
  return out;
}

std::string DriftReport::to_csv() const {
  std::string out = "t,I\n";
  for (std::size_t i = 0; i < times.size(); ++i) out += fmt(times[i]) + "," + fmt(values[i]) + "\n";
  out += "# summary I0=" + fmt(initial) + " max_abs_drift=" + fmt(max_abs_drift) +
         " relative_drift=" + fmt(relative_drift) + " worst_t=" + fmt(times.empty() ? 0.0 : times[worst_index]) +
         " threshold=" + fmt(threshold) + " conserved=" + (conserved ? "yes" : "no") + "\n";
  return out;
}

DriftReport drift(const Invariant& inv, const ode::Trajectory& traj, double threshold, kernels::Exec exec) {
  const auto s = ode::samples(traj);
  if (s.empty()) throw InputError("empty trajectory");
  DriftReport r;
  r.threshold = threshold;
  r.times.reserve(s.size());
  for (const auto& p : s) r.times.push_back(p.t);
  r.values.assign(s.size(), 0.0);
  kernels::detail::for_each_index(s.size(), exec, [&](std::size_t i) {
    try {
      r.values[i] = inv(s[i].t, s[i].x, s[i].v);
    } catch (const DomainError& e) {
      throw DomainError("invariant not defined at sample " + std::to_string(i) + " (t=" + fmt(s[i].t) +
                        "): " + e.what());
    }
    if (!std::isfinite(r.values[i]))
      throw DomainError("invariant is not finite at sample " + std::to_string(i) + " (t=" + fmt(s[i].t) + ")");
  });
  r.initial = r.values.front();
  const auto dev = kernels::max_abs_deviation(r.values, r.initial);
  r.max_abs_drift = dev.value;
  r.worst_index = dev.index;
  const double norm = std::max({1.0, std::abs(r.initial), kernels::max_abs(r.values).value});
  r.relative_drift = r.max_abs_drift / norm;
  r.conserved = r.relative_drift < threshold;
  return r;
}

}  // namespace emden::inv
