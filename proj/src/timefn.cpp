#include "emden/timefn.hpp"

#include <cmath>
#include <cstdio>

namespace emden {

TimeFn TimeFn::constant(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return TimeFn([c](double) { return c; }, buf);
}

TimeFn TimeFn::from_expr(const expr::Expr& e, const expr::Bindings& bindings) {
  expr::Program program(e, bindings);
  std::string label = program.source();
  return TimeFn([program = std::move(program)](double t) { return program(t); }, std::move(label));
}

TimeFn TimeFn::parse(const std::string& source, const expr::Bindings& bindings) {
  return from_expr(expr::parse(source), bindings);
}

TimeFn operator+(const TimeFn& a, const TimeFn& b) {
  return TimeFn([a, b](double t) { return a(t) + b(t); }, "(" + a.label() + " + " + b.label() + ")");
}
TimeFn operator-(const TimeFn& a, const TimeFn& b) {
  return TimeFn([a, b](double t) { return a(t) - b(t); }, "(" + a.label() + " - " + b.label() + ")");
}
TimeFn operator*(const TimeFn& a, const TimeFn& b) {
  return TimeFn([a, b](double t) { return a(t) * b(t); }, "(" + a.label() + " * " + b.label() + ")");
}
TimeFn operator/(const TimeFn& a, const TimeFn& b) {
  return TimeFn(
      [a, b](double t) {
        const double d = b(t);
        if (d == 0.0) throw DomainError("division by zero evaluating quotient at t=" + std::to_string(t));
        return a(t) / d;
      },
      "(" + a.label() + " / " + b.label() + ")");
}
TimeFn operator*(double c, const TimeFn& a) { return TimeFn::constant(c) * a; }

SmoothFn SmoothFn::from_expr(const expr::Expr& e, const expr::Bindings& bindings) {
  auto program = std::make_shared<const expr::Program>(e, bindings);
  const std::string label = program->source();
  return SmoothFn{
      TimeFn([program](double t) { return (*program)(t); }, label),
      TimeFn([program](double t) { return (*program)(Jet::variable(t)).d1; }, "d/dt " + label),
      TimeFn([program](double t) { return (*program)(Jet::variable(t)).d2; }, "d2/dt2 " + label),
  };
}

SmoothFn SmoothFn::parse(const std::string& source, const expr::Bindings& bindings) {
  return from_expr(expr::parse(source), bindings);
}

SmoothFn SmoothFn::constant(double c) {
  return SmoothFn{TimeFn::constant(c), TimeFn::constant(0.0), TimeFn::constant(0.0)};
}

SmoothFn SmoothFn::finite_difference(const TimeFn& f, double h) {
  auto step = [h](double t) { return h * std::max(1.0, std::abs(t)); };
  TimeFn d1(
      [f, step](double t) {
        const double s = step(t);
        return (f(t - 2 * s) - 8 * f(t - s) + 8 * f(t + s) - f(t + 2 * s)) / (12 * s);
      },
      "fd d/dt " + f.label());
  TimeFn d2(
      [f, step](double t) {
        const double s = step(t);
        return (-f(t - 2 * s) + 16 * f(t - s) - 30 * f(t) + 16 * f(t + s) - f(t + 2 * s)) / (12 * s * s);
      },
      "fd d2/dt2 " + f.label());
  return SmoothFn{f, std::move(d1), std::move(d2)};
}

}  // namespace emden
