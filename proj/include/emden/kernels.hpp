#pragma once

// Data-parallel evaluation kernels. Every kernel has a serial reference path
// (Exec::Serial) that the OpenMP path must reproduce bit for bit: each output
// slot is written by exactly one iteration and reductions are done serially
// over the filled buffer.

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "emden/ode.hpp"

namespace emden::kernels {

enum class Exec { Serial, Parallel };

/// Number of worker threads used by Exec::Parallel (0 keeps the runtime default).
void set_threads(int jobs);
int max_threads();

namespace detail {

/// Runs body(i) for i in [0, n); rethrows the exception of the lowest failing
/// index so error reports do not depend on scheduling.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body body) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(emden_kernel_error)
      {
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// values[i] = f(ts[i])
template <class F>
std::vector<double> sample(std::span<const double> ts, const F& f, Exec exec = Exec::Parallel) {
  std::vector<double> out(ts.size());
  detail::for_each_index(ts.size(), exec, [&](std::size_t i) { out[i] = f(ts[i]); });
  return out;
}

/// values[i] = f(t_i, x_i, v_i) along trajectory samples.
template <class F>
std::vector<double> along(std::span<const ode::Sample> samples, const F& f, Exec exec = Exec::Parallel) {
  std::vector<double> out(samples.size());
  detail::for_each_index(samples.size(), exec, [&](std::size_t i) {
    const auto& s = samples[i];
    out[i] = f(s.t, s.x, s.v);
  });
  return out;
}

struct Extremum {
  double value = 0.0;
  std::size_t index = 0;
};

/// max_i |values[i] - reference| (first index on ties).
Extremum max_abs_deviation(std::span<const double> values, double reference);
/// max_i |values[i]|
Extremum max_abs(std::span<const double> values);
double mean_abs(std::span<const double> values);

}  // namespace emden::kernels
