#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "emden/exprlang.hpp"
#include "emden/jet.hpp"

namespace emden {

/// Scalar function of time. Wraps whatever realizes it: a compiled expression,
/// a quadrature-defined antiderivative, a dense ODE solution or a closed form.
class TimeFn {
 public:
  using Fn = std::function<double(double)>;

  TimeFn() : TimeFn(constant(0.0)) {}
  TimeFn(Fn fn, std::string label) : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

  double operator()(double t) const { return (*fn_)(t); }
  const std::string& label() const { return label_; }

  static TimeFn constant(double c);
  static TimeFn from_expr(const expr::Expr& e, const expr::Bindings& bindings = {});
  static TimeFn parse(const std::string& source, const expr::Bindings& bindings = {});

 private:
  std::shared_ptr<const Fn> fn_;
  std::string label_;
};

TimeFn operator+(const TimeFn& a, const TimeFn& b);
TimeFn operator-(const TimeFn& a, const TimeFn& b);
TimeFn operator*(const TimeFn& a, const TimeFn& b);
TimeFn operator/(const TimeFn& a, const TimeFn& b);
TimeFn operator*(double c, const TimeFn& a);

/// A function together with its first two derivatives.
struct SmoothFn {
  TimeFn value;
  TimeFn first;
  TimeFn second;

  double operator()(double t) const { return value(t); }

  /// Build from a generic callable `f(auto t)` that works for both double and
  /// Jet; derivatives come from Taylor arithmetic.
  template <class F>
  static SmoothFn from_generic(F f, const std::string& label) {
    auto shared = std::make_shared<F>(std::move(f));
    return SmoothFn{
        TimeFn([shared](double t) { return (*shared)(t); }, label),
        TimeFn([shared](double t) { return (*shared)(Jet::variable(t)).d1; }, "d/dt " + label),
        TimeFn([shared](double t) { return (*shared)(Jet::variable(t)).d2; }, "d2/dt2 " + label),
    };
  }

  static SmoothFn from_expr(const expr::Expr& e, const expr::Bindings& bindings = {});
  static SmoothFn parse(const std::string& source, const expr::Bindings& bindings = {});
  static SmoothFn constant(double c);
  /// Derivatives by fourth-order central differences with step h*max(1,|t|).
  static SmoothFn finite_difference(const TimeFn& f, double h = 1e-3);
};

}  // namespace emden
