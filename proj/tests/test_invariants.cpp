#include <doctest.h>

#include <cmath>

#include "emden/invariants.hpp"
#include "emden/solutions.hpp"
#include "test_support.hpp"

using namespace emden;
using namespace emden::inv;

namespace {

ode::Trajectory trajectory(const gauge::EmdenProblem& p, double t0, double t1, std::array<double, 2> z0,
                           std::size_t samples = 200) {
  return ode::integrate<2>(gauge::SchemeSystem::from(p).rhs(), t0, {z0[0], z0[1]}, t1, {},
                           ode::linspace(t0, t1, samples));
}

}  // namespace

TEST_CASE("generic first integral") {
  const auto I = generic_first_integral(1, 1, -1, -1, 0, 5);
  for (auto [x, v] : {std::pair{0.3, 0.2}, {1.1, -0.7}, {0.5, 2.0}})
    CHECK(I(0, x, v) == doctest::Approx(-(std::pow(x, 6) / 6 + v * v / 2 + x * v)).epsilon(1e-14));
  const auto L = generic_first_integral(1, 1, -1, -1, 0, -1);
  CHECK(L(0, 2.0, 0.5) == doctest::Approx(-(std::log(2.0) + 0.125 + 1.0)));
  CHECK_THROWS_AS(generic_first_integral(1, 1, 1, -1, 0, 5), ConditionError);
}

TEST_CASE("property: generic first integral is annihilated by its autonomous field") {
  auto rng = testing::rng();
  std::uniform_real_distribution<double> u(0.1, 2.0), c(-2.0, 2.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const double c11 = c(rng), c12 = c(rng), c22 = c(rng), cx = c(rng);
    const double n = i % 4 == 0 ? -1.0 : std::round(c(rng) * 3) + 0.5;
    const auto I = generic_first_integral(c11, c12, -c11, c22, cx, n);
    const gauge::ReducedLieSystem s{TimeFn::constant(1), c11, c12, -c11, c22, cx, n};
    const double x = u(rng), v = c(rng);
    const auto F = s.autonomous_rhs()(0, {x, v});
    const double h = 1e-6;
    const double dIx = (I(0, x + h, v) - I(0, x - h, v)) / (2 * h);
    const double dIv = (I(0, x, v + h) - I(0, x, v - h)) / (2 * h);
    const double scale = std::max({1.0, std::abs(dIx * F[0]), std::abs(dIv * F[1]), std::abs(I(0, x, v))});
    CHECK(std::abs(dIx * F[0] + dIv * F[1]) / scale < 1e-6);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("particular-solution invariant for Lane-Emden n=5") {
  const auto p = sol::lane_emden(5);
  const auto I = invariant_from_particular_solution(p, SmoothFn::parse("(2*t)^(-1/2)"), {0.1, 10});
  for (auto [t, x, v] : {std::tuple{0.7, 0.4, -0.1}, {2.0, 1.2, 0.3}, {5.0, -0.3, 0.8}}) {
    const double expected = 4 * t * t * t * std::pow(x, 6) / 3 + 4 * t * t * t * v * v + 4 * t * t * x * v;
    CHECK(I(t, x, v) == doctest::Approx(expected).epsilon(1e-13));
  }
  // zero on the regular solution
  const SmoothFn reg = SmoothFn::parse("(1+t^2/3)^(-1/2)");
  for (double t : ode::linspace(0.1, 10, 100)) CHECK(std::abs(I(t, reg(t), reg.first(t))) < 1e-12);
  // drift along a generic trajectory
  const auto d = drift(I, trajectory(p, 0.5, 5, {1.3, -0.2}));
  CHECK(d.relative_drift < 1e-7);
  CHECK(d.conserved);
  // negative control
  const Invariant x_only{[](double, double x, double) { return x; }, "x", {0.5, 5}};
  const auto bad = drift(x_only, trajectory(p, 0.5, 5, {1.3, -0.2}));
  CHECK_FALSE(bad.conserved);
  CHECK(bad.relative_drift > 0.1);
  const Invariant constant{[](double, double, double) { return 3.0; }, "c", {0.5, 5}};
  CHECK(drift(constant, trajectory(p, 0.5, 5, {1.3, -0.2})).max_abs_drift == 0.0);
}

TEST_CASE("drift CSV and serial/parallel agreement") {
  const auto p = sol::lane_emden(5);
  const auto I = invariant_from_particular_solution(p, SmoothFn::parse("(2*t)^(-1/2)"), {0.1, 10});
  const auto traj = trajectory(p, 0.5, 5, {1.3, -0.2}, 50);
  const auto a = drift(I, traj, 1e-6, kernels::Exec::Serial);
  const auto b = drift(I, traj, 1e-6, kernels::Exec::Parallel);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_csv().rfind("t,I\n0.5,", 0) == 0);
  CHECK(a.to_csv().find("# summary I0=") != std::string::npos);
  const Invariant logx{[](double, double x, double) { return std::log(x - 10); }, "bad", {0.5, 5}};
  CHECK_THROWS_WITH_AS(drift(logx, traj), doctest::Contains("sample 0"), DomainError);
}

TEST_CASE("first t-dependent construction") {
  const gauge::EmdenProblem autonomous{TimeFn::constant(0), TimeFn::constant(-2), 3, {}};
  const auto r = exp_gauge_invariant(autonomous, {0, 5}, 0);
  REQUIRE(r.invariant);
  CHECK(r.condition.K == doctest::Approx(-2));
  CHECK((*r.invariant)(1.0, 0.5, 0.3) == doctest::Approx(0.045 + 2 * 0.0625 / 4));
  CHECK(drift(*r.invariant, trajectory(autonomous, 0, 5, {1, 0.2})).relative_drift < 1e-8);

  const gauge::EmdenProblem damped{TimeFn::constant(0.3), TimeFn::parse("-1.5*exp(0.6*t)"), 5, {}};
  const auto d = exp_gauge_invariant(damped, {0, 3}, 0);
  REQUIRE(d.invariant);
  CHECK(d.condition.K == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(drift(*d.invariant, trajectory(damped, 0, 3, {0.7, 0.1})).relative_drift < 1e-7);

  const auto fail = exp_gauge_invariant(sol::lane_emden(5), {1, 5}, 1);
  CHECK_FALSE(fail.condition.holds);
  CHECK_FALSE(fail.invariant);
  CHECK(fail.condition.samples.size() == 200);
}

TEST_CASE("second t-dependent construction") {
  const double K = -0.8;
  for (double n : {5.0, 2.0, 0.5}) {
    CAPTURE(n);
    const gauge::EmdenProblem p{TimeFn::constant(0), TimeFn::parse("K*(2*t)^(-m)", {{"K", K}, {"m", (n + 3) / 2}}), n, {0}};
    const auto r = sqrt_gauge_invariant(p, {1, 10}, 0, 0);
    REQUIRE(r.invariant);
    CHECK(r.condition.K == doctest::Approx(K).epsilon(1e-10));
    CHECK(drift(*r.invariant, trajectory(p, 1, 10, {0.9, 0.1})).relative_drift < 1e-6);
  }
  // n = -3 degenerate branch: I = (v^2/2 + K x^-2/2)(t - s) - x v/2
  const gauge::EmdenProblem m3{TimeFn::constant(0), TimeFn::constant(2.0), -3, {}};
  const auto r = sqrt_gauge_invariant(m3, {1, 10}, 0, 0);
  REQUIRE(r.invariant);
  const double t = 3, x = 1.2, v = -0.4;
  CHECK((*r.invariant)(t, x, v) == doctest::Approx((v * v / 2 + 2.0 / (2 * x * x)) * t - x * v / 2).epsilon(1e-11));
  CHECK(drift(*r.invariant, trajectory(m3, 1, 10, {1.0, 0.3})).relative_drift < 1e-6);
  // a = -2/t, b = -1, n = 5: decided by evaluation (b t^4 (2(1/t0 - 1/t))^4 is not constant)
  const auto le = sqrt_gauge_invariant(sol::lane_emden(5), {1, 5}, 1, 0.5);
  CHECK_FALSE(le.condition.holds);
}
