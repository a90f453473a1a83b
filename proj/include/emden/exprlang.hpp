#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "emden/errors.hpp"
#include "emden/jet.hpp"

namespace emden::expr {

enum class NodeKind { Number, Time, Constant, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Exp, Log, Sin, Cos, Sqrt, Abs, Pow };

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  std::string name;  // Constant
  Function function = Function::Exp;
  std::vector<std::shared_ptr<const Node>> children;
};

using NodePtr = std::shared_ptr<const Node>;
using Bindings = std::map<std::string, double, std::less<>>;

/// Immutable parsed expression of the single variable `t` and named constants.
class Expr {
 public:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  NodePtr root_ptr() const { return root_; }
  /// Names of constants referenced, sorted and unique.
  std::vector<std::string> constants() const;
  /// Fully parenthesized rendering that parses back to an equal tree.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

Expr parse(std::string_view source);

/// Flat postfix program with every constant resolved. Cheap to copy and safe
/// to evaluate concurrently.
class Program {
 public:
  /// Throws InputError if a referenced constant is missing from `bindings`.
  Program(const Expr& e, const Bindings& bindings);

  double operator()(double t) const;
  Jet operator()(const Jet& t) const;
  const std::string& source() const { return source_; }

 private:
  enum class Op { Push, Time, Negate, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Sqrt, Abs };
  struct Instr {
    Op op;
    double value;
  };
  template <class T>
  T run(const T& t) const;
  void emit(const Node& n, const Bindings& bindings);

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  std::string source_;
};

/// Evaluate with domain checking; throws DomainError instead of returning NaN/inf.
double eval(const Expr& e, double t, const Bindings& bindings = {});

/// Direct tree-walking evaluator. Kept as the reference the compiled program
/// is tested against; applies exactly the same floating-point operations.
double eval_recursive(const Expr& e, double t, const Bindings& bindings = {});

}  // namespace emden::expr
