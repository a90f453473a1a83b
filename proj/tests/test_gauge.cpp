#include <doctest.h>

#include <cmath>

#include "emden/gauge.hpp"
#include "emden/solutions.hpp"
#include "test_support.hpp"

using namespace emden;
using namespace emden::gauge;

namespace {

EmdenProblem le5() { return sol::lane_emden(5.0); }

GaugeTransform particular_gauge() {
  const SmoothFn xp = SmoothFn::parse("(2*t)^(-1/2)");
  const SmoothFn beta = SmoothFn::parse("(2*t)^(-3/2)");  // -xdot_p
  return {SmoothFn::constant(0.0), beta, xp};
}

}  // namespace

TEST_CASE("push_system: identity and alpha = 0 cases") {
  const auto sys = SchemeSystem::from(le5());
  const auto id = push_system(sys, GaugeTransform::identity(), {0.5, 5});
  for (double t : {0.5, 1.0, 3.3}) {
    const auto c = id.coefficients(t);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 1.0);
    CHECK(c[2] == doctest::Approx(-2.0 / t));
    CHECK(c[3] == 0.0);
    CHECK(c[4] == -1.0);
  }
  const GaugeTransform g{SmoothFn::constant(0.0), SmoothFn::parse("exp(t)"), SmoothFn::parse("1+t^2")};
  const auto pushed = push_system(sys, g, {0.5, 5});
  for (double t : {0.5, 1.0, 3.3}) {
    const auto c = pushed.coefficients(t);
    const double ga = 1 + t * t;
    CHECK(c[0] == doctest::Approx(-2 * t / ga));
    CHECK(c[1] == doctest::Approx(std::exp(t) / ga));
    CHECK(c[2] == doctest::Approx(-2.0 / t - 1.0));
    CHECK(c[3] == doctest::Approx(0.0));
    CHECK(c[4] == doctest::Approx(-std::pow(ga, 5) / std::exp(t)));
  }
}

TEST_CASE("push_system: generalized problem with gamma = beta = 1/t gives the canonical table") {
  const GeneralizedProblem prob{TimeFn::parse("2/t"), TimeFn::constant(0), TimeFn::constant(1), 5.0, {0.0}};
  const SmoothFn g = SmoothFn::parse("1/t");
  const GaugeTransform gauge{SmoothFn{g.first, g.second, SmoothFn::finite_difference(g.second).first}, g, g};
  const auto pushed = push_system(SchemeSystem::from(prob), gauge, {1, 5});
  for (double t : {1.0, 2.0, 4.5}) {
    const auto c = pushed.coefficients(t);
    CHECK(std::abs(c[0]) < 1e-14);
    CHECK(c[1] == doctest::Approx(1.0));
    CHECK(std::abs(c[2]) < 1e-14);
    CHECK(std::abs(c[3]) < 1e-14);
    CHECK(c[4] == doctest::Approx(std::pow(t, -4.0)).epsilon(1e-13));
  }
}

TEST_CASE("property: pushing with a gauge and then its inverse restores the coefficients") {
  auto rng = testing::rng();
  std::uniform_real_distribution<double> u(0.2, 1.5);
  const auto sys = SchemeSystem::from(EmdenProblem{TimeFn::parse("-1/(1+t)"), TimeFn::parse("-(1+t^2)"), 3.0, {}});
  for (int trial = 0; trial < 5; ++trial) {
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
    const expr::Bindings b{{"c1", c1}, {"c2", c2}, {"c3", c3}};
    const GaugeTransform g{SmoothFn::parse("c1*sin(t)", b), SmoothFn::parse("exp(c2*t)", b),
                           SmoothFn::parse("1 + c3*t^2", b)};
    const Interval iv{0.1, 3.0};
    const auto back = push_system(push_system(sys, g, iv), g.inverse(), iv);
    for (double t : ode::linspace(0.1, 3.0, 17)) {
      const auto a = sys.coefficients(t), r = back.coefficients(t);
      for (int i = 0; i < 5; ++i) CHECK(std::abs(a[i] - r[i]) <= 1e-9 * std::max(1.0, std::abs(a[i])));
    }
    for (double t : {0.3, 2.0}) {
      const auto z = g.forward(t, 0.7, -0.4);
      const auto w = g.backward(t, z[0], z[1]);
      CHECK(w[0] == doctest::Approx(0.7).epsilon(1e-14));
      CHECK(w[1] == doctest::Approx(-0.4).epsilon(1e-14));
    }
  }
}

TEST_CASE("gauge positivity") {
  const GaugeTransform bad{SmoothFn::constant(0), SmoothFn::parse("-(2*t)^(-3/2)"), SmoothFn::parse("(2*t)^(-1/2)")};
  CHECK_THROWS_AS(bad.check_positive({0.5, 5}), DomainError);
  CHECK_THROWS_AS(verify_gstar(SchemeSystem::from(le5()), bad, {1, 0}, {0.5, 5}), DomainError);
}

TEST_CASE("verify_gstar") {
  const auto sys = SchemeSystem::from(le5());
  const auto id = verify_gstar(sys, GaugeTransform::identity(), {1.0, -0.1}, {0.5, 5});
  CHECK(id.pass);
  CHECK(id.discrepancy <= 1e-12);
  const auto r = verify_gstar(sys, particular_gauge(), {1.3, -0.2}, {0.5, 5});
  CHECK(r.pass);
  CHECK(r.discrepancy < 1e-6);
}

TEST_CASE("reduce_via_particular_solution") {
  const auto red = reduce_via_particular_solution(le5(), SmoothFn::parse("(2*t)^(-1/2)"), {0.5, 10});
  CHECK(red.system.c11 == 1);
  CHECK(red.system.c22 == -1);
  CHECK(red.system.f(2.0) == doctest::Approx(1.0 / 4.0));  // -xdot_p/x_p = 1/(2t)
  for (const auto& [name, v] : red.checks) CHECK(v < 1e-8);

  const EmdenProblem n2{TimeFn::parse("-5/(t+1)"), TimeFn::constant(-1), 2.0, {-1}};
  CHECK_NOTHROW(reduce_via_particular_solution(n2, SmoothFn::parse("4/(t+1)^2"), {0.5, 5}));

  EmdenProblem n3 = le5();
  n3.n = 3;
  CHECK_THROWS_AS(reduce_via_particular_solution(n3, SmoothFn::parse("(2*t)^(-1/2)"), {0.5, 5}), ConditionError);
  CHECK_THROWS_AS(reduce_via_particular_solution(le5(), SmoothFn::parse("(2*t)^(-1/2)"), {-1, 5}), InputError);

  // the reduced system integrated and mapped back reproduces the original trajectory
  ode::IntegratorConfig cfg;
  const auto ts = ode::linspace(0.5, 5, 50);
  const auto orig = ode::integrate<2>(SchemeSystem::from(le5()).rhs(), 0.5, {1.3, -0.2}, 5, cfg, ts);
  const auto z0 = red.gauge.backward(0.5, 1.3, -0.2);
  const auto reduced = ode::integrate<2>(red.system.rhs(), 0.5, {z0[0], z0[1]}, 5, cfg, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto z = red.gauge.forward(ts[i], reduced.states()[i][0], reduced.states()[i][1]);
    CHECK(std::abs(z[0] - orig.states()[i][0]) < 100 * cfg.rel_tol * 2);
    CHECK(std::abs(z[1] - orig.states()[i][1]) < 100 * cfg.rel_tol * 2);
  }
  CHECK(render(red).find("c11=1 c12=1 c21=-1 c22=-1 cx=0") != std::string::npos);
}

TEST_CASE("reparametrize") {
  ReducedLieSystem s{TimeFn::constant(1.0), 1, 1, -1, -1, 0, 5};
  const auto r = reparametrize(s, 0.5, {0.5, 3});
  CHECK(r.tau(2.0) == doctest::Approx(1.5).epsilon(1e-13));

  const EmdenProblem zero_a{TimeFn::constant(0.0), TimeFn::constant(2.0), 3.0, {}};
  const auto first = reduce_exp_gauge(zero_a, {0.5, 3}, 0.5);
  REQUIRE(first.reduction);
  CHECK(first.condition.K == doctest::Approx(2.0));
  const auto r0 = reparametrize(first.reduction->system, 0.5, {0.5, 3});
  CHECK(r0.tau(2.5) == doctest::Approx(2.0).epsilon(1e-12));

  const EmdenProblem unit_a{TimeFn::constant(1.0), TimeFn::parse("2*exp(2*t)"), 3.0, {}};
  const auto e1 = reduce_exp_gauge(unit_a, {0.5, 3}, 0.0);
  REQUIRE(e1.reduction);
  const auto r1 = reparametrize(e1.reduction->system, 0.5, {0.5, 3});
  for (double t : {0.5, 1.0, 2.9}) CHECK(r1.tau(t) == doctest::Approx(std::exp(t) - std::exp(0.5)).epsilon(1e-12));

  ReducedLieSystem flip{TimeFn::parse("t-1"), 1, 1, -1, -1, 0, 5};
  CHECK_THROWS_AS(reparametrize(flip, 0.5, {0.5, 3}), DomainError);
}

TEST_CASE("time-dependent gauge conditions") {
  const EmdenProblem le{TimeFn::parse("-2/t"), TimeFn::constant(-1), 5.0, {0}};
  CHECK_FALSE(reduce_exp_gauge(le, {1, 5}, 1).condition.holds);
  const EmdenProblem matched{TimeFn::constant(0), TimeFn::parse("3*(2*t)^(-4)"), 5.0, {0}};
  const auto s = reduce_sqrt_gauge(matched, {1, 10}, 0.0, 0.0);
  CHECK(s.condition.holds);
  CHECK(s.condition.K == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(reduce_sqrt_gauge(matched, {1, 10}, 0.0, 2.0), DomainError);
  CHECK_FALSE(reduce_sqrt_gauge(matched, {1, 10}, 0.0, 1.0).condition.holds);
}

TEST_CASE("Kummer-Liouville") {
  const GeneralizedProblem le{TimeFn::parse("2/t"), TimeFn::constant(0), TimeFn::constant(1), 5.0, {0}};
  for (double t0 : {1.0, 2.0}) {
    const Interval iv{t0, t0 + 4};
    const auto kl = kummer_liouville(le, {1 / t0, -1 / (t0 * t0)}, iv);
    for (double t : ode::linspace(iv.t0, iv.t1, 20)) {
      CHECK(kl.gauge.gamma(t) * t == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(kl.gauge.beta(t) * t == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(kl.tau(t) == doctest::Approx(t - t0).epsilon(1e-9));
      CHECK(kl.canonical(t) == doctest::Approx(std::pow(t, -4.0)).epsilon(1e-9));
    }
    const auto chk = verify_canonical(le, kl, {0.5, 0.0});
    CHECK(chk.pass);
    CHECK(chk.max_residual < 1e-6);
  }
  // no damping: identity reduction
  const GeneralizedProblem free{TimeFn::constant(0), TimeFn::constant(0), TimeFn::constant(1), 3.0, {}};
  const auto id = kummer_liouville(free, {1, 0}, {0, 2});
  CHECK(id.gauge.beta(1.3) == doctest::Approx(1.0));
  CHECK(id.canonical(1.3) == doctest::Approx(1.0));
  // constant damping c: beta = exp(-ct), tau = (1 - exp(-ct))/c, coefficient exp(2ct)
  const double c = 0.7;
  const GeneralizedProblem damped{TimeFn::constant(c), TimeFn::constant(0), TimeFn::constant(1), 3.0, {}};
  const auto d = kummer_liouville(damped, {1, 0}, {0, 2});
  for (double t : {0.3, 1.1, 2.0}) {
    CHECK(d.gauge.beta(t) == doctest::Approx(std::exp(-c * t)).epsilon(1e-11));
    CHECK(d.tau(t) == doctest::Approx((1 - std::exp(-c * t)) / c).epsilon(1e-11));
    CHECK(d.canonical(t) == doctest::Approx(std::exp(2 * c * t)).epsilon(1e-10));
  }
  // oscillatory gamma hits zero
  const GeneralizedProblem osc{TimeFn::constant(0), TimeFn::constant(1), TimeFn::constant(1), 3.0, {}};
  CHECK_THROWS_AS(kummer_liouville(osc, {1, 0}, {0, 3}), DomainError);
}
