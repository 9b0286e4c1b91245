#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace absubdiff::expr {

/// Parse failure, with the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

/// Runtime evaluation failure (division by zero, sqrt of a negative);
/// carries the offending subexpression in printed form.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& msg, const std::string& subexpr)
      : std::runtime_error(msg + " in '" + subexpr + "'"), subexpr(subexpr) {}
  std::string subexpr;
};

/// Arithmetic expression over variables x, t, u, the constant pi, the
/// operators + - * / ^ (with ^ binding tightest and right-associative,
/// unary minus below it), and sin, cos, exp, sqrt, abs.
class Expr {
 public:
  struct Node;

  static Expr parse(std::string_view src);  // throws ParseError

  double eval(double x, double t, double u) const;  // throws EvalError

  /// Whether the named variable ('x', 't' or 'u') appears.
  bool uses(char var) const;

  /// Fully parenthesized form; parses back to an equivalent expression.
  std::string to_string() const;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace absubdiff::expr
