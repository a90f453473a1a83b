#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "emden/errors.hpp"

namespace emden::ode {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 selects a step automatically
  std::size_t max_steps = 2'000'000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InputError("integrator tolerances must be positive");
    if (!(max_step > 0.0)) throw InputError("integrator max_step must be positive");
    if (initial_step < 0.0) throw InputError("integrator initial_step must be nonnegative");
  }
};

class IntegrationError : public Error {
 public:
  enum class Kind { StepSizeUnderflow, TooManySteps };
  IntegrationError(Kind kind, double t_reached, bool nonfinite_rhs, const std::string& what)
      : Error(what), kind_(kind), t_reached_(t_reached), nonfinite_rhs_(nonfinite_rhs) {}
  Kind kind() const { return kind_; }
  double t_reached() const { return t_reached_; }
  /// The rejected steps that drove the failure saw a non-finite right-hand side.
  bool nonfinite_rhs() const { return nonfinite_rhs_; }

 private:
  Kind kind_;
  double t_reached_;
  bool nonfinite_rhs_;
};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<State<N>(double, const State<N>&)>;

/// One accepted step with the coefficients of the Dormand-Prince continuous
/// extension (order 4) over it.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> r{};

  State<N> at(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    return y;
  }
};

template <std::size_t N>
class Solution;

template <std::size_t N>
Solution<N> integrate(const Rhs<N>& f, double t0, const State<N>& y0, double t1, const IntegratorConfig& cfg,
                      const std::vector<double>& output_times = {});

/// Result of one integration: recorded samples plus the dense interpolant over
/// the whole integrated range.
template <std::size_t N>
class Solution {
 public:
  const std::vector<double>& times() const { return times_; }
  const std::vector<State<N>>& states() const { return states_; }
  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }

  /// Dense evaluation anywhere in the integrated range.
  State<N> at(double t) const {
    const double lo = std::min(t_begin_, t_end_), hi = std::max(t_begin_, t_end_);
    if (t < lo - 1e-12 * std::max(1.0, std::abs(lo)) || t > hi + 1e-12 * std::max(1.0, std::abs(hi)))
      throw InputError("dense output requested outside the integrated range");
    if (steps_.empty()) return states_.front();
    const bool forward = t_end_ > t_begin_;
    // Steps are stored in integration order; t0 is monotone in that order.
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t, [forward](double value, const DenseStep<N>& s) {
      return forward ? value < s.t0 : value > s.t0;
    });
    if (it != steps_.begin()) --it;
    return it->at(t);
  }

 private:
  template <std::size_t M>
  friend Solution<M> integrate(const Rhs<M>&, double, const State<M>&, double, const IntegratorConfig&,
                               const std::vector<double>&);

  std::vector<double> times_;
  std::vector<State<N>> states_;
  std::vector<DenseStep<N>> steps_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
};

namespace detail {

template <std::size_t N>
bool finite(const State<N>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [c, k] : terms)
    for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  return out;
}

/// Evaluate the rhs, mapping exceptions from the coefficient functions
/// (DomainError) and non-finite results to "no value".
template <std::size_t N>
bool try_eval(const Rhs<N>& f, double t, const State<N>& y, State<N>& out) {
  if (!finite(y)) return false;
  try {
    out = f(t, y);
  } catch (const DomainError&) {
    return false;
  }
  return finite(out);
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration from t0 to t1 (either direction).
/// Samples are recorded at `output_times` (interpolated with the continuous
/// extension) or, when that is empty, at every accepted step including t0.
/// Stages that produce a non-finite value count as rejected steps; if the
/// step size shrinks below the floating-point resolution of t, an
/// IntegrationError reports where.
template <std::size_t N>
Solution<N> integrate(const Rhs<N>& f, double t0, const State<N>& y0, double t1, const IntegratorConfig& cfg,
                      const std::vector<double>& output_times) {
  cfg.validate();
  if (t0 == t1) throw InputError("integration interval is empty (t0 == t1)");
  if (!detail::finite(y0)) throw InputError("non-finite initial state");

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    const double t = output_times[i];
    if ((t - t0) * dir < 0.0 || (t - t1) * dir > 0.0) throw InputError("output time outside integration interval");
    if (i > 0 && (t - output_times[i - 1]) * dir <= 0.0)
      throw InputError("output times must be strictly monotone in the integration direction");
  }

  Solution<N> sol;
  sol.t_begin_ = t0;
  sol.t_end_ = t1;

  auto err_norm = [&](const State<N>& y, const State<N>& ynew, const State<N>& err) {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      sum += (err[i] / sc) * (err[i] / sc);
    }
    return std::sqrt(sum / N);
  };

  double t = t0;
  State<N> y = y0;
  State<N> k1;
  bool last_failure_nonfinite = false;
  const double span = std::abs(t1 - t0);
  const double max_step = std::min(cfg.max_step, span);

  // k1 at the start may itself be non-finite (e.g. a coefficient singular at
  // t0); then no step can be taken and the step size collapses below.
  bool have_k1 = detail::try_eval(f, t, y, k1);

  double h = cfg.initial_step;
  if (h == 0.0) {
    if (have_k1) {
      // Hairer-Wanner starting step heuristic.
      double dnf = 0.0, dny = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        dnf += (k1[i] / sk) * (k1[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
      }
      h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
      h = std::min(h, max_step);
      State<N> k2;
      const State<N> y1 = detail::axpy<N>(y, dir * h, {{1.0, &k1}});
      if (detail::try_eval(f, t + dir * h, y1, k2)) {
        double der2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
          der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
        h = std::min({100 * h, h1, max_step});
      } else {
        h *= 1e-3;
      }
    } else {
      h = std::min(1e-3 * span, max_step);
    }
  }
  h = std::min(h, max_step);

  std::size_t next_out = 0;
  const bool record_steps = output_times.empty();
  auto record = [&](double tt, const State<N>& yy) {
    sol.times_.push_back(tt);
    sol.states_.push_back(yy);
  };
  if (record_steps) record(t, y);
  while (next_out < output_times.size() && output_times[next_out] == t0) record(output_times[next_out++], y);

  double err_prev = 1e-4;  // for the PI controller
  bool reject_prev = false;
  while ((t1 - t) * dir > 0.0) {
    if (sol.accepted_ + sol.rejected_ >= cfg.max_steps)
      throw IntegrationError(IntegrationError::Kind::TooManySteps, t, last_failure_nonfinite,
                             "step budget exhausted at t=" + std::to_string(t));
    const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_h)
      throw IntegrationError(IntegrationError::Kind::StepSizeUnderflow, t, last_failure_nonfinite,
                             "step size underflow at t=" + std::to_string(t) +
                                 (last_failure_nonfinite ? " (non-finite right-hand side)" : ""));
    bool last = false;
    if ((t + dir * h - t1) * dir >= 0.0) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;

    auto reject = [&](bool nonfinite, double factor) {
      last_failure_nonfinite = nonfinite;
      ++sol.rejected_;
      h *= factor;
      reject_prev = true;
    };

    if (!have_k1) {
      have_k1 = detail::try_eval(f, t, y, k1);
      if (!have_k1) {
        reject(true, 0.25);
        continue;
      }
    }
    State<N> k2, k3, k4, k5, k6, k7;
    const State<N> y2 = detail::axpy<N>(y, hs, {{a21, &k1}});
    if (!detail::try_eval(f, t + c2 * hs, y2, k2)) { reject(true, 0.25); continue; }
    const State<N> y3 = detail::axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}});
    if (!detail::try_eval(f, t + c3 * hs, y3, k3)) { reject(true, 0.25); continue; }
    const State<N> y4 = detail::axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    if (!detail::try_eval(f, t + c4 * hs, y4, k4)) { reject(true, 0.25); continue; }
    const State<N> y5 = detail::axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    if (!detail::try_eval(f, t + c5 * hs, y5, k5)) { reject(true, 0.25); continue; }
    const State<N> y6 = detail::axpy<N>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const double t_new = last ? t1 : t + hs;
    if (!detail::try_eval(f, t_new, y6, k6)) { reject(true, 0.25); continue; }
    const State<N> ynew = detail::axpy<N>(y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    if (!detail::try_eval(f, t_new, ynew, k7)) { reject(true, 0.25); continue; }

    State<N> err;
    for (std::size_t i = 0; i < N; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double en = err_norm(y, ynew, err);

    if (en > 1.0) {
      reject(false, std::max(0.2, 0.9 * std::pow(en, -0.2)));
      continue;
    }

    DenseStep<N> ds;
    ds.t0 = t;
    ds.h = hs;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = hs * k1[i] - ydiff;
      ds.r[0][i] = y[i];
      ds.r[1][i] = ydiff;
      ds.r[2][i] = bspl;
      ds.r[3][i] = ydiff - hs * k7[i] - bspl;
      ds.r[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    sol.steps_.push_back(ds);
    ++sol.accepted_;

    while (next_out < output_times.size() && (output_times[next_out] - t_new) * dir <= 0.0) {
      const double to = output_times[next_out++];
      record(to, to == t_new ? ynew : ds.at(to));
    }
    t = t_new;
    y = ynew;
    k1 = k7;  // first-same-as-last
    if (record_steps) record(t, y);

    // PI step-size control (Gustafsson), exponents from Hairer's DOPRI5.
    const double en_safe = std::max(en, 1e-10);
    double fac = 0.9 * std::pow(en_safe, -0.17) * std::pow(err_prev, 0.04);
    fac = std::clamp(fac, 0.2, 10.0);
    if (reject_prev) fac = std::min(fac, 1.0);
    err_prev = std::max(en, 1e-4);
    reject_prev = false;
    h = std::min(h * fac, max_step);
  }
  return sol;
}

/// Planar trajectory (t, x, v).
using Trajectory = Solution<2>;

struct Sample {
  double t, x, v;
};

std::vector<Sample> samples(const Trajectory& traj);

/// "t,x,v" header and one row per sample, 17 significant digits.
std::string to_csv(const Trajectory& traj);

/// n evenly spaced points covering [a, b] inclusive (n >= 2).
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace emden::ode
