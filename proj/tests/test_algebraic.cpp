#include <doctest.h>

#include <cmath>

#include "emden/algebraic.hpp"
#include "emden/solutions.hpp"

using namespace emden;
using namespace emden::alg;

TEST_CASE("algebraic scalars normalize radicals") {
  const auto r2 = AlgebraicScalar::power(2, Rational(1, 2));
  CHECK(r2 * r2 == AlgebraicScalar(2));
  CHECK((r2 * r2 * r2).str() == "2*2^(1/2)");
  const auto k2 = AlgebraicScalar::power(Rational(1, 36), Rational(1, 8));  // (4/144)^(1/8)
  CHECK(k2.to_double() == doctest::Approx(std::pow(1.0 / 36.0, 0.125)).epsilon(1e-15));
  CHECK(k2.pow(8) == AlgebraicScalar(Rational(1, 36)));
  CHECK(AlgebraicScalar::power(Rational(1, 16), Rational(1, 4)) == AlgebraicScalar(Rational(1, 2)));
  CHECK_THROWS_AS(AlgebraicScalar::power(-2, Rational(1, 2)), DomainError);
  CHECK(AlgebraicScalar::power(-2, Rational(3)) == AlgebraicScalar(-8));
}

TEST_CASE("particular-solution invariant for n=5, x_p=(2t)^(-1/2) expands to the cubic-in-t form") {
  const PowerLaw xp{AlgebraicScalar::power(2, Rational(-1, 2)), Rational(-1, 2), Rational(1)};
  const Expansion got = particular_invariant(xp, Rational(5));
  Expansion want;
  want.add(Rational(4, 3), {3, 6, 0});
  want.add(Rational(4), {3, 0, 2});
  want.add(Rational(4), {2, 1, 1});
  CHECK((got - want).is_zero());
  CHECK(got.str("t") == "4*t^2*x*v + 4*t^3*v^2 + 4/3*t^3*x^6");
}

TEST_CASE("catalog invariants reproduce the printed forms up to a constant ratio") {
  for (double K : {0.5, 1.0, 3.0}) {
    for (const auto& e : sol::catalog(K)) {
      if (!e.symbolic || e.symbolic->reference.is_zero()) continue;
      CAPTURE(e.id);
      const auto cand = particular_invariant(e.symbolic->xp, e.symbolic->n);
      const auto cmp = compare_proportional(cand, e.symbolic->reference);
      CHECK(cmp.proportional);
      CHECK(cmp.residual.is_zero());
      // and numerically against the sampled evaluator
      const double s = 1.7, x = 0.4, v = -0.3;
      CHECK(cand.evaluate(s, x, v) == doctest::Approx(cmp.ratio.to_double() * e.symbolic->reference.evaluate(s, x, v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("power-law invariant is proportional to the closed form with ratio K2^-(n+1)") {
  for (double n : {2.0, 3.0, 5.0, 7.0, 9.0, 0.5, -2.0}) {
    CAPTURE(n);
    const auto e = sol::powerlaw_solution(n, 1.0);
    REQUIRE(e.symbolic);
    const auto cmp = compare_proportional(particular_invariant(e.symbolic->xp, e.symbolic->n), e.symbolic->reference);
    CHECK(cmp.proportional);
    CHECK(cmp.ratio.to_double() == doctest::Approx(std::pow(e.parameters.at("K2"), -(n + 1))).epsilon(1e-12));
  }
}

TEST_CASE("non-proportional expansions are detected") {
  Expansion a, b;
  a.add(Rational(1), {1, 2, 0});
  a.add(Rational(2), {0, 0, 2});
  b.add(Rational(1), {1, 2, 0});
  b.add(Rational(3), {0, 0, 2});
  const auto cmp = compare_proportional(a, b);
  CHECK_FALSE(cmp.proportional);
  CHECK_FALSE(cmp.residual.is_zero());
}
