#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "emden/ode.hpp"
#include "emden/quadrature.hpp"
#include "emden/timefn.hpp"

namespace emden::gauge {

struct Interval {
  double t0 = 0.0;
  double t1 = 1.0;
  void validate() const;
  /// Throws InputError if a singular point lies in the closed interval.
  void check_avoids(const std::vector<double>& singular_points) const;
};

/// xdd = a(t) xd + b(t) x^n
struct EmdenProblem {
  TimeFn a;
  TimeFn b;
  double n = 0.0;
  std::vector<double> singular_points;
  void validate() const;
};

/// xdd + p(t) xd + q(t) x = r(t) x^n
struct GeneralizedProblem {
  TimeFn p;
  TimeFn q;
  TimeFn r;
  double n = 0.0;
  std::vector<double> singular_points;
  void validate() const;
};

/// x' = A x + B v,  v' = C v + D x + E x^n: the general member of the scheme's
/// family, coefficients ordered as the generators X5, X3, X4, X1, X2.
struct SchemeSystem {
  TimeFn A, B, C, D, E;
  double n = 0.0;

  static SchemeSystem from(const EmdenProblem& p);
  static SchemeSystem from(const GeneralizedProblem& p);
  std::array<double, 5> coefficients(double t) const;
  ode::Rhs<2> rhs() const;
};

/// x = gamma x', v = beta v' + alpha x'.
struct GaugeTransform {
  SmoothFn alpha;
  SmoothFn beta;
  SmoothFn gamma;

  static GaugeTransform identity();
  /// beta and gamma positive at `samples` points of the interval; throws DomainError.
  void check_positive(const Interval& iv, std::size_t samples = 200) const;
  std::array<double, 2> forward(double t, double xp, double vp) const;
  std::array<double, 2> backward(double t, double x, double v) const;
  /// gamma~ = 1/gamma, beta~ = 1/beta, alpha~ = -alpha/(beta gamma).
  GaugeTransform inverse() const;
};

/// Coefficient table of the system satisfied by (x', v').
SchemeSystem push_system(const SchemeSystem& sys, const GaugeTransform& g, const Interval& iv);

struct GstarReport {
  double discrepancy = 0.0;  // sup over samples of |z'_mapped - z'_pushed|
  double scale = 1.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t samples = 0;
};

/// Integrate the original system, map samples through the inverse gauge and
/// compare with an independent integration of the pushed system.
GstarReport verify_gstar(const SchemeSystem& sys, const GaugeTransform& g, std::array<double, 2> z0,
                         const Interval& iv, const ode::IntegratorConfig& cfg = {}, std::size_t samples = 200);

/// dx'/dt = f (c11 x' + c12 v'),  dv'/dt = f (c21 v' + cx x' + c22 x'^n)
struct ReducedLieSystem {
  TimeFn f;
  double c11 = 0, c12 = 0, c21 = 0, c22 = 0, cx = 0;
  double n = 0.0;

  ode::Rhs<2> rhs() const;
  ode::Rhs<2> autonomous_rhs() const;
};

struct Reduction {
  ReducedLieSystem system;
  GaugeTransform gauge;
  Interval interval;
  std::vector<std::pair<std::string, double>> checks;  // name -> worst observed value
};

struct ReductionTolerances {
  double residual = 1e-9;
  double intcond = 1e-9;
  double consistency = 1e-8;
  std::size_t samples = 200;
};

/// gamma = x_p, beta = -xdot_p, alpha = 0, (c11,c12,c21,c22,cx) = (1,1,-1,-1,0).
/// Requires x_p to solve the equation, xdot_p^2 = -b x_p^(n+1) and xdot_p < 0.
Reduction reduce_via_particular_solution(const EmdenProblem& prob, const SmoothFn& xp, const Interval& iv,
                                         const ReductionTolerances& tol = {});

struct ConditionReport {
  bool holds = false;
  double K = 0.0;
  double variation = 0.0;  // max relative deviation from the mean
  std::vector<std::pair<double, double>> samples;  // (t, value)
};

/// Integrals of a that the constructions below share. Lower limits are
/// explicit; `outer_lower` must lie strictly below the interval so that the
/// nested integral G stays positive.
struct NestedIntegrals {
  quad::Antiderivative A;                 // int_{inner_lower}^t a
  std::optional<quad::Antiderivative> G;  // int_{outer_lower}^t exp(A)
  double E(double t) const;
};

NestedIntegrals nested_integrals(const TimeFn& a, const Interval& iv, double inner_lower,
                                 std::optional<double> outer_lower);

struct ConditionalReduction {
  ConditionReport condition;
  std::optional<Reduction> reduction;  // present when the condition holds
};

/// gamma = 1, alpha = 0, beta = exp(int a); needs b exp(-2 int a) = K.
ConditionalReduction reduce_exp_gauge(const EmdenProblem& prob, const Interval& iv, double inner_lower,
                            double rel_tol = 1e-8, std::size_t samples = 200);
/// gamma = sqrt(2G), beta = exp(int a)/gamma; needs b exp(-2 int a) (2G)^((n+3)/2) = K.
ConditionalReduction reduce_sqrt_gauge(const EmdenProblem& prob, const Interval& iv, double inner_lower, double outer_lower,
                             double rel_tol = 1e-8, std::size_t samples = 200);

struct Reparametrization {
  quad::Antiderivative tau;
  ode::Rhs<2> autonomous;
};

/// tau(t) = int_{t0}^t f; throws DomainError if f changes sign on the interval.
Reparametrization reparametrize(const ReducedLieSystem& sys, double t0, const Interval& iv);

struct KummerLiouville {
  GaugeTransform gauge;  // alpha = gammadot
  ode::Solution<2> gamma_solution;
  quad::Antiderivative tau;
  TimeFn canonical;  // r gamma^(n+1) / beta^2
  Interval interval;
};

struct CanonicalCheck {
  double max_residual = 0.0;  // |d2x'/dtau2 - F x'^n| / max(1, |F x'^n|)
  double max_first_order = 0.0;  // |dx'/dtau - v'|
  std::size_t samples = 0;
  bool pass = false;
};

/// gamma from gammadd = -q gamma - p gammadot with gamma(t0), gammadot(t0) given;
/// beta(t) = gamma(t0)^2 exp(-int_{t0}^t p) / gamma(t), so beta(t0) = gamma(t0).
/// Throws DomainError if gamma reaches zero in the interval.
KummerLiouville kummer_liouville(const GeneralizedProblem& prob, std::array<double, 2> gamma_init, const Interval& iv,
                                 const ode::IntegratorConfig& cfg = {});

/// Integrate the original equation from z0 at iv.t0, transform, and test the
/// canonical equation with finite differences of the dense output.
CanonicalCheck verify_canonical(const GeneralizedProblem& prob, const KummerLiouville& kl, std::array<double, 2> z0,
                                double tol = 1e-6, std::size_t samples = 200);

/// Plain-text report of a reduction: sampled gauge, coefficients and checks.
std::string render(const Reduction& r, std::size_t samples = 5);

}  // namespace emden::gauge
