#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emden/gauge.hpp"
#include "emden/kernels.hpp"

namespace emden::inv {

/// t-dependent function I(t, x, v) that is claimed to be constant along solutions.
struct Invariant {
  std::function<double(double, double, double)> evaluator;
  std::string provenance;  // "generic", "particular-solution", "exp-gauge", "sqrt-gauge", catalog id
  gauge::Interval validity;

  double operator()(double t, double x, double v) const { return evaluator(t, x, v); }
};

/// First integral of the autonomous field (c11 x + c12 v) d/dx + (c21 v + cx x + c22 x^n) d/dv:
/// -c12 v^2/2 + cx x^2/2 + c21 v x + c22 x^(n+1)/(n+1), with c22 log x for n = -1.
/// Requires c21 = -c11; the integrating-factor case is not supported.
Invariant generic_first_integral(double c11, double c12, double c21, double c22, double cx, double n);

/// I(t, x, v) = I'(x', v') with (x', v') the gauge preimage of (x, v).
Invariant pull_back(const Invariant& primed, const gauge::GaugeTransform& g, const std::string& provenance);

/// x^(n+1)/((n+1) x_p^(n+1)) + v^2/(2 xdot_p^2) - x v/(x_p xdot_p)   (log form for n = -1).
/// Runs the reduction checks on x_p over `iv` first.
Invariant invariant_from_particular_solution(const gauge::EmdenProblem& prob, const SmoothFn& xp,
                                             const gauge::Interval& iv);

struct ConditionalInvariant {
  gauge::ConditionReport condition;
  std::optional<Invariant> invariant;
};

/// exp(-2 int a) (v^2/2 - b x^(n+1)/(n+1)) when b exp(-2 int a) is constant.
/// `inner_lower` is the lower limit of int a.
ConditionalInvariant exp_gauge_invariant(const gauge::EmdenProblem& prob, const gauge::Interval& iv, double inner_lower,
                              double rel_tol = 1e-8);
/// (v^2/2 - b x^(n+1)/(n+1)) exp(-2 int a) G - x v exp(-int a)/2, G = int_{outer_lower} exp(int a),
/// when b exp(-2 int a) (2G)^((n+3)/2) is constant.
ConditionalInvariant sqrt_gauge_invariant(const gauge::EmdenProblem& prob, const gauge::Interval& iv, double inner_lower,
                               double outer_lower, double rel_tol = 1e-8);

struct DriftReport {
  std::vector<double> times;
  std::vector<double> values;
  double initial = 0.0;
  double max_abs_drift = 0.0;
  double relative_drift = 0.0;  // max_abs_drift / max(1, |I(t0)|, max |I|)
  std::size_t worst_index = 0;
  double threshold = 0.0;
  bool conserved = false;

  /// "t,I" rows then a "# summary ..." line.
  std::string to_csv() const;
};

/// Evaluate `inv` along every trajectory sample. Domain errors are rethrown
/// naming the offending sample index.
DriftReport drift(const Invariant& inv, const ode::Trajectory& traj, double threshold = 1e-6,
                  kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace emden::inv
