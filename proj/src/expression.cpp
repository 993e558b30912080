#include "contactlab/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "contactlab/errors.hpp"

namespace contactlab::dsl {

namespace {

constexpr struct {
  Function f;
  const char* name;
} kFunctions[] = {{Function::sin, "sin"},   {Function::cos, "cos"},   {Function::tan, "tan"},
                  {Function::exp, "exp"},   {Function::log, "log"},   {Function::sqrt, "sqrt"},
                  {Function::abs, "abs"}};

}  // namespace

const char* function_name(Function f) {
  for (const auto& entry : kFunctions)
    if (entry.f == f) return entry.name;
  return "?";
}

bool is_function_name(std::string_view name) {
  for (const auto& entry : kFunctions)
    if (name == entry.name) return true;
  return false;
}

struct Expression::Node {
  NodeKind kind = NodeKind::literal;
  double value = 0.0;
  std::string name;
  Function function = Function::sin;
  Expression a{std::shared_ptr<const Node>()};
  Expression b{std::shared_ptr<const Node>()};
};

Expression::Expression() {
  static const auto zero = std::make_shared<const Node>();
  node_ = zero;
}

Expression::Expression(double value) {
  if (!std::isfinite(value)) throw Error("non-finite literal");
  if (std::signbit(value)) {
    *this = negate(Expression(-value));
    return;
  }
  auto n = std::make_shared<Node>();
  n->value = value;
  node_ = std::move(n);
}

Expression Expression::identifier(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::identifier;
  n->name = std::move(name);
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::binary(NodeKind kind, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::negate(Expression operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::neg;
  n->a = std::move(operand);
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::call(Function f, Expression argument) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->function = f;
  n->a = std::move(argument);
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

NodeKind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
Function Expression::function() const { return node_->function; }
const Expression& Expression::lhs() const { return node_->a; }
const Expression& Expression::rhs() const { return node_->b; }
const Expression& Expression::operand() const { return node_->a; }

bool Expression::is_literal(double v) const {
  return kind() == NodeKind::literal && value() == v;
}

bool Expression::is_constant() const { return identifiers().empty(); }

namespace {

void collect(const Expression& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case NodeKind::literal: return;
    case NodeKind::identifier: out.insert(e.name()); return;
    case NodeKind::neg:
    case NodeKind::call: collect(e.operand(), out); return;
    default:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
  }
}

int level(const Expression& e) {
  switch (e.kind()) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::neg: return 2;
    case NodeKind::mul:
    case NodeKind::div: return 3;
    case NodeKind::pow: return 4;
    default: return 5;
  }
}

bool printable_exponent(const Expression& e) {
  if (e.kind() == NodeKind::neg) return printable_exponent(e.operand());
  return level(e) == 5;
}

std::string format_literal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Expression& e, std::string& out);

void print_wrapped(const Expression& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::literal: out += format_literal(e.value()); return;
    case NodeKind::identifier: out += e.name(); return;
    case NodeKind::call:
      out += function_name(e.function());
      out += '(';
      print(e.operand(), out);
      out += ')';
      return;
    case NodeKind::neg:
      out += '-';
      print_wrapped(e.operand(), level(e.operand()) < 2, out);
      return;
    case NodeKind::add:
    case NodeKind::sub:
      print(e.lhs(), out);
      out += e.kind() == NodeKind::add ? " + " : " - ";
      print_wrapped(e.rhs(), level(e.rhs()) <= 1, out);
      return;
    case NodeKind::mul:
    case NodeKind::div:
      print_wrapped(e.lhs(), level(e.lhs()) < 3, out);
      out += e.kind() == NodeKind::mul ? '*' : '/';
      print_wrapped(e.rhs(), level(e.rhs()) <= 3, out);
      return;
    case NodeKind::pow:
      print_wrapped(e.lhs(), level(e.lhs()) < 4, out);
      out += '^';
      print_wrapped(e.rhs(), !printable_exponent(e.rhs()), out);
      return;
  }
}

}  // namespace

std::set<std::string> Expression::identifiers() const {
  std::set<std::string> out;
  collect(*this, out);
  return out;
}

std::string Expression::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::literal: return a.value() == b.value();
    case NodeKind::identifier: return a.name() == b.name();
    case NodeKind::call: return a.function() == b.function() && a.operand() == b.operand();
    case NodeKind::neg: return a.operand() == b.operand();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_literal(0)) return b;
  if (b.is_literal(0)) return a;
  if (b.kind() == NodeKind::neg) return Expression::binary(NodeKind::sub, a, b.operand());
  return Expression::binary(NodeKind::add, a, b);
}

Expression operator-(const Expression& a, const Expression& b) {
  if (b.is_literal(0)) return a;
  if (a.is_literal(0)) return -b;
  if (b.kind() == NodeKind::neg) return Expression::binary(NodeKind::add, a, b.operand());
  return Expression::binary(NodeKind::sub, a, b);
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_literal(0) || b.is_literal(0)) return Expression(0.0);
  if (a.is_literal(1)) return b;
  if (b.is_literal(1)) return a;
  if (a.kind() == NodeKind::neg) return -(a.operand() * b);
  if (b.kind() == NodeKind::neg) return -(a * b.operand());
  return Expression::binary(NodeKind::mul, a, b);
}

Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_literal(0)) return Expression(0.0);
  if (b.is_literal(1)) return a;
  if (a.kind() == NodeKind::neg) return -(a.operand() / b);
  if (b.kind() == NodeKind::neg) return -(a / b.operand());
  return Expression::binary(NodeKind::div, a, b);
}

Expression operator-(const Expression& a) {
  if (a.is_literal(0)) return a;
  if (a.kind() == NodeKind::neg) return a.operand();
  return Expression::negate(a);
}

Expression sin(const Expression& a) { return Expression::call(Function::sin, a); }
Expression cos(const Expression& a) { return Expression::call(Function::cos, a); }
Expression sqrt(const Expression& a) { return Expression::call(Function::sqrt, a); }
Expression pow(const Expression& a, const Expression& exponent) {
  return Expression::binary(NodeKind::pow, a, exponent);
}

// ---------------------------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse() {
    skip_space();
    Expression e = expr();
    skip_space();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expression expr() {
    Expression e = term();
    for (;;) {
      if (accept('+')) {
        e = Expression::binary(NodeKind::add, e, term());
      } else if (accept('-')) {
        e = Expression::binary(NodeKind::sub, e, term());
      } else {
        return e;
      }
    }
  }

  Expression term() {
    if (accept('-')) return Expression::negate(term());
    Expression e = factor();
    for (;;) {
      if (accept('*')) {
        e = Expression::binary(NodeKind::mul, e, operand());
      } else if (accept('/')) {
        e = Expression::binary(NodeKind::div, e, operand());
      } else {
        return e;
      }
    }
  }

  Expression operand() {
    if (accept('-')) return Expression::negate(operand());
    return factor();
  }

  Expression factor() {
    Expression e = primary();
    while (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      Expression x = exponent();
      if (!x.is_constant()) {
        throw SyntaxError(at, {"constant exponent"}, "'" + x.to_string() + "'");
      }
      e = Expression::binary(NodeKind::pow, e, x);
    }
    return e;
  }

  Expression exponent() {
    if (accept('-')) return Expression::negate(exponent());
    return primary();
  }

  Expression primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      if (!accept(')')) fail({"')'"});
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (peek() == '(') {
        for (const auto& entry : kFunctions) {
          if (name == entry.name) {
            ++pos_;
            Expression arg = expr();
            if (!accept(')')) fail({"')'"});
            return Expression::call(entry.f, arg);
          }
        }
        pos_ = start;
        fail({"function name (sin, cos, tan, exp, log, sqrt, abs)"});
      }
      if (is_function_name(name)) {
        fail({"'('"});
      }
      return Expression::identifier(std::move(name));
    }
    fail({"number", "identifier", "function call", "'('", "'-'"});
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail({"number"});
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail({"exponent digits"});
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      pos_ = start;
      fail({"representable number"});
    }
    return Expression(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------------------------
// Evaluation

void check_identifiers(const Expression& expr, const std::vector<std::string>& coordinate_names) {
  for (const std::string& id : expr.identifiers()) {
    bool found = false;
    for (const auto& n : coordinate_names) found = found || n == id;
    if (!found) throw UnknownIdentifier(id);
  }
}

BoundExpression::BoundExpression(Expression expr, const std::vector<std::string>& coordinate_names)
    : expr_(std::move(expr)) {
  check_identifiers(expr_, coordinate_names);
  compile(expr_, coordinate_names);
  std::size_t depth = 0;
  for (const Op& op : program_) {
    switch (op.kind) {
      case NodeKind::literal:
      case NodeKind::identifier: ++depth; break;
      case NodeKind::neg:
      case NodeKind::call: break;
      default: --depth;
    }
    depth_ = std::max(depth_, depth);
  }
}

void BoundExpression::compile(const Expression& e, const std::vector<std::string>& names) {
  Op op{e.kind()};
  switch (e.kind()) {
    case NodeKind::literal: op.value = e.value(); break;
    case NodeKind::identifier:
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == e.name()) op.slot = static_cast<int>(i);
      break;
    case NodeKind::neg: compile(e.operand(), names); break;
    case NodeKind::call:
      compile(e.operand(), names);
      op.function = e.function();
      op.source = static_cast<int>(sources_.size());
      sources_.push_back(e);
      break;
    default:
      compile(e.lhs(), names);
      compile(e.rhs(), names);
      op.source = static_cast<int>(sources_.size());
      sources_.push_back(e);
  }
  program_.push_back(op);
}

double BoundExpression::operator()(const Point& p) const {
  double small[32] = {};
  std::vector<double> large;
  double* stack = small;
  if (depth_ > 32) {
    large.resize(depth_);
    stack = large.data();
  }
  std::size_t top = 0;
  auto fail = [&](const Op& op, const char* what) -> double {
    throw EvalError(what, sources_[static_cast<std::size_t>(op.source)].to_string());
  };
  for (const Op& op : program_) {
    switch (op.kind) {
      case NodeKind::literal: stack[top++] = op.value; break;
      case NodeKind::identifier: stack[top++] = p[op.slot]; break;
      case NodeKind::neg: stack[top - 1] = -stack[top - 1]; break;
      case NodeKind::call: {
        double& x = stack[top - 1];
        switch (op.function) {
          case Function::sin: x = std::sin(x); break;
          case Function::cos: x = std::cos(x); break;
          case Function::tan: x = std::tan(x); break;
          case Function::exp: x = std::exp(x); break;
          case Function::log:
            if (!(x > 0.0)) fail(op, "log of a non-positive number");
            x = std::log(x);
            break;
          case Function::sqrt:
            if (x < 0.0) fail(op, "sqrt of a negative number");
            x = std::sqrt(x);
            break;
          case Function::abs: x = std::abs(x); break;
        }
        break;
      }
      default: {
        const double b = stack[--top];
        double& a = stack[top - 1];
        switch (op.kind) {
          case NodeKind::add: a = a + b; break;
          case NodeKind::sub: a = a - b; break;
          case NodeKind::mul: a = a * b; break;
          case NodeKind::div:
            if (b == 0.0) fail(op, "division by zero");
            a = a / b;
            break;
          case NodeKind::pow:
            a = std::pow(a, b);
            if (!std::isfinite(a)) fail(op, "non-finite power");
            break;
          default: break;
        }
      }
    }
  }
  return stack[0];
}

double evaluate(const Expression& expr, const std::vector<std::string>& coordinate_names,
                const Point& p) {
  return BoundExpression(expr, coordinate_names)(p);
}

}  // namespace contactlab::dsl
