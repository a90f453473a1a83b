#pragma once

#include <vector>

#include "emden/timefn.hpp"

namespace emden::quad {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]
/// (b < a allowed). Subdivides the interval with the largest error estimate
/// until the summed estimate is <= tol. Throws DomainError on a non-finite
/// integrand sample and Error when max_intervals is exhausted.
QuadResult integrate(const TimeFn& f, double a, double b, double tol = 1e-12, std::size_t max_intervals = 2000);

/// Convenience returning just the value.
double quad(const TimeFn& f, double a, double b, double tol = 1e-12);

/// t -> integral of `integrand` from `lower` to t. Cumulative values at panel
/// boundaries over [range_lo, range_hi] are computed once, so evaluation is a
/// single short quadrature and the object is immutable afterwards. Outside the
/// range evaluation still works by integrating from the nearest boundary.
class Antiderivative {
 public:
  Antiderivative(TimeFn integrand, double lower, double range_lo, double range_hi, std::size_t panels = 64,
                 double tol = 1e-13);

  double operator()(double t) const;
  double lower() const { return lower_; }
  const std::vector<double>& nodes() const { return nodes_; }
  TimeFn as_timefn() const;

 private:
  TimeFn integrand_;
  double lower_;
  double tol_;
  std::vector<double> nodes_;   // sorted, contains lower_
  std::vector<double> values_;  // integral from lower_ to nodes_[i]
};

}  // namespace emden::quad
