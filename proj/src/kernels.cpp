#include "emden/kernels.hpp"

namespace emden::kernels {

void set_threads(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Extremum max_abs_deviation(std::span<const double> values, double reference) {
  Extremum e;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = std::abs(values[i] - reference);
    if (d > e.value || std::isnan(d)) {
      e = {d, i};
      if (std::isnan(d)) break;
    }
  }
  return e;
}

Extremum max_abs(std::span<const double> values) { return max_abs_deviation(values, 0.0); }

double mean_abs(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum / static_cast<double>(values.size());
}

}  // namespace emden::kernels
