#include "emden/ode.hpp"

#include <cstdio>

namespace emden::ode {

std::vector<Sample> samples(const Trajectory& traj) {
  std::vector<Sample> out;
  out.reserve(traj.times().size());
  for (std::size_t i = 0; i < traj.times().size(); ++i)
    out.push_back({traj.times()[i], traj.states()[i][0], traj.states()[i][1]});
  return out;
}

std::string to_csv(const Trajectory& traj) {
  std::string out = "t,x,v\n";
  char buf[128];
  for (const auto& s : samples(traj)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.x, s.v);
    out += buf;
  }
  return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw InputError("linspace needs at least two points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

}  // namespace emden::ode
