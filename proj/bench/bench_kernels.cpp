// Serial reference vs OpenMP path of the sampling kernels. Arg(0) = serial, Arg(1) = parallel.

#include <benchmark/benchmark.h>

#include "emden/invariants.hpp"
#include "emden/kernels.hpp"
#include "emden/solutions.hpp"

using namespace emden;

namespace {

kernels::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? kernels::Exec::Serial : kernels::Exec::Parallel;
}

void BM_SampleExpression(benchmark::State& state) {
  const auto f = TimeFn::parse("sqrt(3/2)*sqrt((3+t^2-abs(t^2-3)+4*(3+t^2+abs(t^2-3)))/((12+t^2)*(3+4*t^2)))");
  const auto ts = ode::linspace(0.1, 50, 200'000);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sample(ts, f, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ts.size()));
}
BENCHMARK(BM_SampleExpression)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Drift(benchmark::State& state) {
  const auto le = sol::lane_emden(5.0);
  const gauge::Interval iv{0.5, 5};
  const auto I = inv::invariant_from_particular_solution(le, SmoothFn::parse("(2*t)^(-1/2)"), iv);
  const auto traj = ode::integrate<2>(gauge::SchemeSystem::from(le).rhs(), iv.t0, {1.3, -0.2}, iv.t1, {},
                                      ode::linspace(iv.t0, iv.t1, 100'000));
  for (auto _ : state) benchmark::DoNotOptimize(inv::drift(I, traj, 1e-6, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(traj.times().size()));
}
BENCHMARK(BM_Drift)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ResidualGrid(benchmark::State& state) {
  const auto le = sol::lane_emden(5.0);
  const auto x = sol::k_family(2.0);
  const auto ts = ode::linspace(0.1, 50, 100'000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::sample(
        ts,
        [&](double t) {
          return x.second(t) - le.a(t) * x.first(t) - le.b(t) * std::pow(x.value(t), 5.0);
        },
        exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ts.size()));
}
BENCHMARK(BM_ResidualGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
