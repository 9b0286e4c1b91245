#include "absubdiff/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "absubdiff/core.hpp"

namespace absubdiff::expr {

namespace {

enum class Fn { sin, cos, exp, sqrt, abs };

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::exp: return "exp";
    case Fn::sqrt: return "sqrt";
    case Fn::abs: return "abs";
  }
  return "?";
}

}  // namespace

struct Expr::Node {
  enum class Kind { number, variable, negate, binary, call };
  Kind kind;
  double value = 0.0;  // number
  char var = 0;        // variable: 'x', 't', 'u'
  char op = 0;         // binary: + - * / ^
  Fn fn = Fn::sin;     // call
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->value = v;
  return n;
}

NodePtr make_var(char c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::variable;
  n->var = c;
  return n;
}

NodePtr make_neg(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::negate;
  n->a = std::move(a);
  return n;
}

NodePtr make_bin(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::binary;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(Fn fn, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError("empty expression", 0);
    }
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ < src_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (consume('+')) {
        lhs = make_bin('+', std::move(lhs), parse_product());
      } else if (consume('-')) {
        lhs = make_bin('-', std::move(lhs), parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = make_bin('*', std::move(lhs), parse_unary());
      } else if (consume('/')) {
        lhs = make_bin('/', std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) {
      return make_neg(parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (consume('^')) {
      // right-associative; the exponent may carry its own unary minus
      return make_bin('^', std::move(base), parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!consume(')')) {
        throw ParseError("expected ')'", pos_);
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_ident();
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t expo = pos_ + 1;
      if (expo < src_.size() && (src_[expo] == '+' || src_[expo] == '-')) {
        ++expo;
      }
      if (expo < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[expo]))) {
        pos_ = expo;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          ++pos_;
        }
      }
    }
    const std::string tok(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
      throw ParseError("malformed number '" + tok + "'", start);
    }
    return make_number(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(src_.substr(start, pos_ - start));
    if (name == "x" || name == "t" || name == "u") {
      return make_var(name[0]);
    }
    if (name == "pi") {
      return make_number(pi);
    }
    for (Fn f : {Fn::sin, Fn::cos, Fn::exp, Fn::sqrt, Fn::abs}) {
      if (name == fn_name(f)) {
        if (!consume('(')) {
          throw ParseError("function '" + name + "' needs an argument list",
                           pos_);
        }
        NodePtr arg = parse_sum();
        if (!consume(')')) {
          throw ParseError("expected ')' after argument of '" + name + "'",
                           pos_);
        }
        return make_call(f, std::move(arg));
      }
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

std::string print_node(const Node& n) {
  switch (n.kind) {
    case Node::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    }
    case Node::Kind::variable:
      return std::string(1, n.var);
    case Node::Kind::negate:
      return "(-" + print_node(*n.a) + ")";
    case Node::Kind::binary:
      return "(" + print_node(*n.a) + n.op + print_node(*n.b) + ")";
    case Node::Kind::call:
      return std::string(fn_name(n.fn)) + "(" + print_node(*n.a) + ")";
  }
  return "?";
}

double eval_node(const Node& n, double x, double t, double u) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable:
      return n.var == 'x' ? x : (n.var == 't' ? t : u);
    case Node::Kind::negate:
      return -eval_node(*n.a, x, t, u);
    case Node::Kind::binary: {
      const double a = eval_node(*n.a, x, t, u);
      const double b = eval_node(*n.b, x, t, u);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) {
            throw EvalError("division by zero", print_node(n));
          }
          return a / b;
        case '^': {
          const double r = std::pow(a, b);
          if (std::isnan(r)) {
            throw EvalError("invalid power", print_node(n));
          }
          return r;
        }
      }
      return 0.0;
    }
    case Node::Kind::call: {
      const double a = eval_node(*n.a, x, t, u);
      switch (n.fn) {
        case Fn::sin: return std::sin(a);
        case Fn::cos: return std::cos(a);
        case Fn::exp: return std::exp(a);
        case Fn::sqrt:
          if (a < 0.0) {
            throw EvalError("sqrt of a negative value", print_node(n));
          }
          return std::sqrt(a);
        case Fn::abs: return std::fabs(a);
      }
      return 0.0;
    }
  }
  return 0.0;
}

bool node_uses(const Node& n, char var) {
  switch (n.kind) {
    case Node::Kind::number:
      return false;
    case Node::Kind::variable:
      return n.var == var;
    case Node::Kind::negate:
    case Node::Kind::call:
      return node_uses(*n.a, var);
    case Node::Kind::binary:
      return node_uses(*n.a, var) || node_uses(*n.b, var);
  }
  return false;
}

}  // namespace

Expr Expr::parse(std::string_view src) {
  return Expr(Parser(src).run());
}

double Expr::eval(double x, double t, double u) const {
  return eval_node(*root_, x, t, u);
}

bool Expr::uses(char var) const {
  return node_uses(*root_, var);
}

std::string Expr::to_string() const {
  return print_node(*root_);
}

}  // namespace absubdiff::expr
