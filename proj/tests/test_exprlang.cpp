#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "emden/exprlang.hpp"
#include "emden/timefn.hpp"
#include "test_support.hpp"

using namespace emden;
using emden::expr::eval;
using emden::expr::parse;

TEST_CASE("parse and evaluate basic forms") {
  CHECK(eval(parse("-2/t"), 1.0) == -2.0);
  CHECK(eval(parse("(1+t^2/3)^(-1/2)"), 0.0) == 1.0);
  CHECK(eval(parse("2^3^2"), 0.0) == 512.0);
  CHECK(eval(parse("t"), 3.5) == 3.5);
  CHECK(std::abs(eval(parse("exp(log(t))"), 2.0) - 2.0) <= 1e-15);
  CHECK(eval(parse("-2^2"), 0.0) == -4.0);
  CHECK(eval(parse("2^-1"), 0.0) == 0.5);
  CHECK(eval(parse("2*3+4*5"), 0.0) == 26.0);
  CHECK(eval(parse("(2+3)*4"), 0.0) == 20.0);
  CHECK(eval(parse("8/4/2"), 0.0) == 1.0);
  CHECK(eval(parse("abs(-3+t^2)"), 1.0) == 2.0);
  CHECK(eval(parse("pow(t, 3)"), 2.0) == 8.0);
  CHECK(eval(parse("1.5e2 + .5"), 0.0) == 150.5);
  CHECK(eval(parse("K*t"), 2.0, {{"K", 3.0}}) == 6.0);
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse("2t");
    FAIL("implicit multiplication accepted");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 1);
  }
  try {
    parse("1 + (2 * 3");
    FAIL("unbalanced parenthesis accepted");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 10);
  }
  CHECK_THROWS_AS(parse("foo(t)"), ParseError);
  CHECK_THROWS_AS(parse("sqrt"), ParseError);
  CHECK_THROWS_AS(parse("pow(t)"), ParseError);
  CHECK_THROWS_AS(parse("   "), ParseError);
  CHECK_THROWS_AS(parse("1 $ 2"), ParseError);
}

TEST_CASE("unbound identifiers fail at bind time") {
  const auto e = parse("K1 + K2*t");
  CHECK(e.constants() == std::vector<std::string>{"K1", "K2"});
  CHECK_THROWS_AS(expr::Program(e, {{"K1", 1.0}}), InputError);
  CHECK(expr::Program(e, {{"K1", 1.0}, {"K2", 2.0}})(3.0) == 7.0);
}

TEST_CASE("domain violations are errors, not NaN") {
  CHECK_THROWS_AS(eval(parse("sqrt(t-1)"), 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("log(t)"), 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("log(t)"), -1.0), DomainError);
  CHECK_THROWS_AS(eval(parse("1/t"), 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("t^(-2)"), 0.0), DomainError);
  CHECK_THROWS_AS(eval(parse("t^0.5"), -4.0), DomainError);
  CHECK(eval(parse("t^3"), -2.0) == -8.0);
  CHECK_THROWS_AS(eval(parse("exp(t)"), 1000.0), DomainError);
}

TEST_CASE("jet evaluation gives exact derivatives") {
  const auto f = SmoothFn::parse("(1+t^2/3)^(-1/2)");
  const double t = 1.7;
  const double base = 1 + t * t / 3;
  CHECK(f.first(t) == doctest::Approx(-(t / 3) * std::pow(base, -1.5)).epsilon(1e-14));
  const double second = -std::pow(base, -1.5) / 3 + (t * t / 3) * std::pow(base, -2.5);
  CHECK(f.second(t) == doctest::Approx(second).epsilon(1e-13));
}

namespace {

std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  std::uniform_real_distribution<double> num(0.1, 3.0);
  switch (pick(rng)) {
    case 0: return "t";
    case 1: return std::to_string(num(rng));
    case 2: return "K";
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
    case 6: return random_expr(rng, depth - 1) + " / (1 + abs(" + random_expr(rng, depth - 1) + "))";
    case 7: return "-" + random_expr(rng, depth - 1);
    case 8: return "(1 + abs(" + random_expr(rng, depth - 1) + "))^" + std::to_string(num(rng) - 1.5);
    case 9: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 10: return "sqrt(abs(" + random_expr(rng, depth - 1) + "))";
    default: return "exp(cos(" + random_expr(rng, depth - 1) + "))";
  }
}

}  // namespace

TEST_CASE("property: print-parse idempotence and compiled == recursive to 0 ulp") {
  auto rng = testing::rng();
  std::uniform_real_distribution<double> tdist(-3.0, 3.0);
  const expr::Bindings bindings{{"K", 1.25}};
  int evaluated = 0;
  for (int i = 0; i < 500; ++i) {
    const std::string src = random_expr(rng, 5);
    const auto e = parse(src);
    const auto reparsed = parse(e.str());
    REQUIRE_MESSAGE(reparsed == e, src);
    CHECK(parse(reparsed.str()).str() == e.str());
    const expr::Program program(e, bindings);
    for (int k = 0; k < 5; ++k) {
      const double t = tdist(rng);
      double fast = 0.0, ref = 0.0;
      bool fast_ok = true, ref_ok = true;
      try { fast = program(t); } catch (const DomainError&) { fast_ok = false; }
      try { ref = expr::eval_recursive(e, t, bindings); } catch (const DomainError&) { ref_ok = false; }
      REQUIRE(fast_ok == ref_ok);
      if (fast_ok) {
        CHECK(std::memcmp(&fast, &ref, sizeof(double)) == 0);
        ++evaluated;
      }
    }
  }
  CHECK(evaluated > 1000);
}
