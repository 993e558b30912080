#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "contactlab/model.hpp"

namespace contactlab::dsl {

enum class NodeKind { literal, identifier, add, sub, mul, div, pow, neg, call };
enum class Function { sin, cos, tan, exp, log, sqrt, abs };

const char* function_name(Function f);
bool is_function_name(std::string_view name);

/// Immutable arithmetic expression tree; copies share structure.
///
/// Literals are always non-negative: a negative constant is represented as neg(literal), which
/// is also what the parser produces, so printing and reparsing is the identity on trees.
class Expression {
 public:
  Expression();  // literal 0
  Expression(double value);  // NOLINT(google-explicit-constructor): arithmetic builder
  static Expression identifier(std::string name);
  static Expression binary(NodeKind kind, Expression lhs, Expression rhs);
  static Expression negate(Expression operand);
  static Expression call(Function f, Expression argument);

  NodeKind kind() const;
  double value() const;               // literal
  const std::string& name() const;    // identifier
  Function function() const;          // call
  const Expression& lhs() const;      // binary
  const Expression& rhs() const;      // binary
  const Expression& operand() const;  // neg, call

  bool is_literal(double v) const;
  bool is_constant() const;
  std::set<std::string> identifiers() const;

  /// Minimal-parenthesis rendering that parses back to an equal tree.
  std::string to_string() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Builder arithmetic with identity folding (0 + x = x, 1 * x = x, 0 * x = 0, ...). Used to
/// compose expression documents programmatically.
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression sqrt(const Expression& a);
Expression pow(const Expression& a, const Expression& exponent);

/// Grammar, loosest to tightest:
///   expr     := term (('+' | '-') term)*
///   term     := '-' term | factor (('*' | '/') operand)*      operand := '-' operand | factor
///   factor   := primary ('^' exponent)*                       exponent := '-' exponent | primary
///   primary  := number | identifier | function '(' expr ')' | '(' expr ')'
/// A leading minus negates the whole multiplicative term, so "-a*b" is neg(a*b) and "-x^2" is
/// neg(x^2). Exponents must be constant. Throws SyntaxError.
Expression parse_expression(std::string_view text);

/// Expression with identifiers resolved to coordinate slots.
class BoundExpression {
 public:
  BoundExpression(Expression expr, const std::vector<std::string>& coordinate_names);
  double operator()(const Point& p) const;
  const Expression& expression() const { return expr_; }

 private:
  struct Op {
    NodeKind kind;
    Function function = Function::sin;
    double value = 0.0;
    int slot = -1;
    int source = -1;  // index into sources_ for ops that can fail
  };
  void compile(const Expression& e, const std::vector<std::string>& names);

  Expression expr_;
  std::vector<Op> program_;
  std::vector<Expression> sources_;
  std::size_t depth_ = 0;
};

/// Throws UnknownIdentifier when the tree mentions a name outside coordinate_names.
void check_identifiers(const Expression& expr, const std::vector<std::string>& coordinate_names);

/// IEEE double evaluation. Throws EvalError on division by zero, log of a non-positive number,
/// sqrt of a negative number, or a non-finite power.
double evaluate(const Expression& expr, const std::vector<std::string>& coordinate_names,
                const Point& p);

}  // namespace contactlab::dsl
