#include "emden/exprlang.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

namespace emden::expr {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Token(Tok k, std::size_t off, double num = 0.0, std::string txt = {})
      : kind(k), offset(off), number(num), text(std::move(txt)) {}
  Tok kind;
  std::size_t offset;
  double number;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, start};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return {Tok::Ident, start, 0.0, std::string(src_.substr(start, pos_ - start))};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, start};
      case '-': return {Tok::Minus, start};
      case '*': return {Tok::Star, start};
      case '/': return {Tok::Slash, start};
      case '^': return {Tok::Caret, start};
      case '(': return {Tok::LParen, start};
      case ')': return {Tok::RParen, start};
      case ',': return {Tok::Comma, start};
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // "2e" is the number 2 followed by an identifier
    }
    const std::string text(src_.substr(start, pos_ - start));
    return {Tok::Number, start, std::strtod(text.c_str(), nullptr), text};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- parser

struct FunctionInfo {
  const char* name;
  Function function;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"exp", Function::Exp, 1},   {"log", Function::Log, 1}, {"sin", Function::Sin, 1},
    {"cos", Function::Cos, 1},   {"sqrt", Function::Sqrt, 1}, {"abs", Function::Abs, 1},
    {"pow", Function::Pow, 2},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (name == f.name) return &f;
  return nullptr;
}

const FunctionInfo& function_info(Function f) {
  for (const auto& info : kFunctions)
    if (info.function == f) return info;
  throw Error("unknown function tag");
}

NodePtr make_leaf(NodeKind kind, double number = 0.0, std::string name = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->number = number;
  n->name = std::move(name);
  return n;
}

NodePtr make_node(NodeKind kind, std::vector<NodePtr> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

// expr  := term (('+'|'-') term)*
// term  := unary (('*'|'/') unary)*
// unary := '-' unary | power
// power := primary ('^' unary)?          right-associative, binds tighter than unary minus
// primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr e = expression();
    if (tok_.kind != Tok::End) throw ParseError("unexpected trailing input", tok_.offset);
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) throw ParseError(std::string("expected ") + what, tok_.offset);
    advance();
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const NodeKind k = tok_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      lhs = make_node(k, {lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const NodeKind k = tok_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      lhs = make_node(k, {lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return make_node(NodeKind::Negate, {unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (tok_.kind == Tok::Caret) {
      advance();
      return make_node(NodeKind::Pow, {base, unary()});
    }
    return base;
  }

  NodePtr primary() {
    const Token tok = tok_;
    switch (tok.kind) {
      case Tok::Number:
        advance();
        return make_leaf(NodeKind::Number, tok.number);
      case Tok::LParen: {
        advance();
        NodePtr inner = expression();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        advance();
        if (tok_.kind == Tok::LParen) return call(tok);
        if (find_function(tok.text)) throw ParseError("function '" + tok.text + "' needs arguments", tok.offset);
        if (tok.text == "t") return make_leaf(NodeKind::Time);
        return make_leaf(NodeKind::Constant, 0.0, tok.text);
      }
      case Tok::End: throw ParseError("unexpected end of input", tok.offset);
      default: throw ParseError("unexpected token", tok.offset);
    }
  }

  NodePtr call(const Token& name) {
    const FunctionInfo* info = find_function(name.text);
    if (!info) throw ParseError("unknown function '" + name.text + "'", name.offset);
    advance();  // '('
    std::vector<NodePtr> args{expression()};
    while (tok_.kind == Tok::Comma) {
      advance();
      args.push_back(expression());
    }
    expect(Tok::RParen, "')'");
    if (args.size() != info->arity)
      throw ParseError("function '" + name.text + "' takes " + std::to_string(info->arity) + " argument(s)",
                       name.offset);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->function = info->function;
    n->children = std::move(args);
    return n;
  }

  Lexer lexer_;
  Token tok_{Tok::End, 0};
};

// ---------------------------------------------------------------- arithmetic shared by both evaluators

bool is_integer(double p) { return std::nearbyint(p) == p; }

double checked(double v, const char* op) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + op);
  return v;
}

double op_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return checked(a / b, "division");
}
Jet op_div(const Jet& a, const Jet& b) {
  if (b.v == 0.0) throw DomainError("division by zero");
  return a / b;
}

void check_pow(double base, double p) {
  if (base == 0.0 && p < 0.0) throw DomainError("zero raised to a negative power");
  if (base < 0.0 && !is_integer(p)) throw DomainError("negative base raised to a non-integer power");
}
double op_pow(double a, double p) {
  check_pow(a, p);
  return checked(std::pow(a, p), "power");
}
Jet op_pow(const Jet& a, const Jet& p) {
  check_pow(a.v, p.v);
  return pow(a, p);
}

template <class T>
T op_log(const T& a) {
  if (value_of(a) <= 0.0) throw DomainError("log of a nonpositive argument");
  using std::log;
  return log(a);
}
template <class T>
T op_sqrt(const T& a) {
  if (value_of(a) < 0.0) throw DomainError("sqrt of a negative argument");
  using std::sqrt;
  return sqrt(a);
}

void format_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void render(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    render(*n.children[0], out);
    out += op;
    render(*n.children[1], out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Number: format_number(out, n.number); break;
    case NodeKind::Time: out += 't'; break;
    case NodeKind::Constant: out += n.name; break;
    case NodeKind::Negate:
      out += "(-";
      render(*n.children[0], out);
      out += ')';
      break;
    case NodeKind::Add: binary(" + "); break;
    case NodeKind::Sub: binary(" - "); break;
    case NodeKind::Mul: binary(" * "); break;
    case NodeKind::Div: binary(" / "); break;
    case NodeKind::Pow: binary("^"); break;
    case NodeKind::Call: {
      out += function_info(n.function).name;
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        render(*n.children[i], out);
      }
      out += ')';
      break;
    }
  }
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  if (a.kind == NodeKind::Number && a.number != b.number) return false;
  if (a.kind == NodeKind::Constant && a.name != b.name) return false;
  if (a.kind == NodeKind::Call && a.function != b.function) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!equal(*a.children[i], *b.children[i])) return false;
  return true;
}

void collect_constants(const Node& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::Constant) out.insert(n.name);
  for (const auto& c : n.children) collect_constants(*c, out);
}

double lookup(const Bindings& bindings, const std::string& name) {
  const auto it = bindings.find(name);
  if (it == bindings.end()) throw InputError("unbound identifier '" + name + "'");
  return it->second;
}

double recurse(const Node& n, double t, const Bindings& bindings) {
  auto arg = [&](std::size_t i) { return recurse(*n.children[i], t, bindings); };
  switch (n.kind) {
    case NodeKind::Number: return n.number;
    case NodeKind::Time: return t;
    case NodeKind::Constant: return lookup(bindings, n.name);
    case NodeKind::Negate: return -arg(0);
    case NodeKind::Add: return checked(arg(0) + arg(1), "addition");
    case NodeKind::Sub: return checked(arg(0) - arg(1), "subtraction");
    case NodeKind::Mul: return checked(arg(0) * arg(1), "multiplication");
    case NodeKind::Div: return op_div(arg(0), arg(1));
    case NodeKind::Pow: return op_pow(arg(0), arg(1));
    case NodeKind::Call:
      switch (n.function) {
        case Function::Exp: return checked(std::exp(arg(0)), "exp");
        case Function::Log: return op_log(arg(0));
        case Function::Sin: return std::sin(arg(0));
        case Function::Cos: return std::cos(arg(0));
        case Function::Sqrt: return op_sqrt(arg(0));
        case Function::Abs: return std::abs(arg(0));
        case Function::Pow: return op_pow(arg(0), arg(1));
      }
  }
  throw Error("corrupt expression tree");
}

}  // namespace

// ---------------------------------------------------------------- Expr

Expr parse(std::string_view source) {
  if (source.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError("empty expression", 0);
  return Expr(Parser(source).parse_all());
}

std::vector<std::string> Expr::constants() const {
  std::set<std::string> names;
  collect_constants(*root_, names);
  return {names.begin(), names.end()};
}

std::string Expr::str() const {
  std::string out;
  render(*root_, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

// ---------------------------------------------------------------- Program

Program::Program(const Expr& e, const Bindings& bindings) : source_(e.str()) {
  emit(e.root(), bindings);
  std::size_t depth = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::Push:
      case Op::Time: max_depth_ = std::max(max_depth_, ++depth); break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow: --depth; break;
      default: break;
    }
  }
}

void Program::emit(const Node& n, const Bindings& bindings) {
  for (const auto& c : n.children) emit(*c, bindings);
  switch (n.kind) {
    case NodeKind::Number: code_.push_back({Op::Push, n.number}); break;
    case NodeKind::Time: code_.push_back({Op::Time, 0.0}); break;
    case NodeKind::Constant: code_.push_back({Op::Push, lookup(bindings, n.name)}); break;
    case NodeKind::Negate: code_.push_back({Op::Negate, 0.0}); break;
    case NodeKind::Add: code_.push_back({Op::Add, 0.0}); break;
    case NodeKind::Sub: code_.push_back({Op::Sub, 0.0}); break;
    case NodeKind::Mul: code_.push_back({Op::Mul, 0.0}); break;
    case NodeKind::Div: code_.push_back({Op::Div, 0.0}); break;
    case NodeKind::Pow: code_.push_back({Op::Pow, 0.0}); break;
    case NodeKind::Call: {
      static constexpr Op kOps[] = {Op::Exp, Op::Log, Op::Sin, Op::Cos, Op::Sqrt, Op::Abs, Op::Pow};
      code_.push_back({kOps[static_cast<int>(n.function)], 0.0});
      break;
    }
  }
}

template <class T>
T Program::run(const T& t) const {
  // Small fixed stack on the common path; deep expressions fall back to the heap.
  constexpr std::size_t kInline = 32;
  T inline_stack[kInline]{};
  std::vector<T> heap;
  T* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(max_depth_);
    stack = heap.data();
  }
  std::size_t sp = 0;
  using std::cos;
  using std::exp;
  using std::sin;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::Push: stack[sp++] = T(ins.value); break;
      case Op::Time: stack[sp++] = t; break;
      case Op::Negate: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::Add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; checked(value_of(stack[sp - 1]), "addition"); break;
      case Op::Sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; checked(value_of(stack[sp - 1]), "subtraction"); break;
      case Op::Mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; checked(value_of(stack[sp - 1]), "multiplication"); break;
      case Op::Div: --sp; stack[sp - 1] = op_div(stack[sp - 1], stack[sp]); break;
      case Op::Pow: --sp; stack[sp - 1] = op_pow(stack[sp - 1], stack[sp]); break;
      case Op::Exp: stack[sp - 1] = exp(stack[sp - 1]); checked(value_of(stack[sp - 1]), "exp"); break;
      case Op::Log: stack[sp - 1] = op_log(stack[sp - 1]); break;
      case Op::Sin: stack[sp - 1] = sin(stack[sp - 1]); break;
      case Op::Cos: stack[sp - 1] = cos(stack[sp - 1]); break;
      case Op::Sqrt: stack[sp - 1] = op_sqrt(stack[sp - 1]); break;
      case Op::Abs: {
        using std::abs;
        stack[sp - 1] = abs(stack[sp - 1]);
        break;
      }
    }
  }
  return stack[0];
}

double Program::operator()(double t) const { return run<double>(t); }
Jet Program::operator()(const Jet& t) const { return run<Jet>(t); }

double eval(const Expr& e, double t, const Bindings& bindings) { return Program(e, bindings)(t); }

double eval_recursive(const Expr& e, double t, const Bindings& bindings) {
  return recurse(e.root(), t, bindings);
}

}  // namespace emden::expr
