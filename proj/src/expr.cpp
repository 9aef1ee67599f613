/*******************************************************************************
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/
#include "moutard/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace moutard {

namespace {

enum class NodeKind { number, variable, unary_neg, binary, func1, func2 };

enum class BinOp { add, sub, mul, div, pow };

using Fn1 = double (*)(double);
using Fn2 = double (*)(double, double);

struct Fn1Entry {
  const char* name;
  Fn1 fn;
};
struct Fn2Entry {
  const char* name;
  Fn2 fn;
};

double fn_min(double a, double b) { return std::fmin(a, b); }
double fn_max(double a, double b) { return std::fmax(a, b); }

constexpr Fn1Entry kFn1[] = {
    {"exp", std::exp},   {"log", std::log},   {"sin", std::sin},
    {"cos", std::cos},   {"tan", std::tan},   {"sinh", std::sinh},
    {"cosh", std::cosh}, {"tanh", std::tanh}, {"sqrt", std::sqrt},
    {"abs", std::fabs},  {"erf", std::erf},
};

constexpr Fn2Entry kFn2[] = {
    {"pow", std::pow},
    {"min", fn_min},
    {"max", fn_max},
};

} // namespace

struct Expression::Node {
  NodeKind kind;
  double value = 0.0; // number
  int var = 0;        // variable, 1-based
  BinOp op = BinOp::add;
  Fn1 f1 = nullptr;
  Fn2 f2 = nullptr;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::number;
  n->value = v;
  return n;
}

double eval_node(const Node& n, std::span<const double> p) {
  switch (n.kind) {
  case NodeKind::number:
    return n.value;
  case NodeKind::variable: {
    return p[static_cast<std::size_t>(n.var - 1)];
  }
  case NodeKind::unary_neg:
    return -eval_node(*n.a, p);
  case NodeKind::binary: {
    const double a = eval_node(*n.a, p);
    const double b = eval_node(*n.b, p);
    switch (n.op) {
    case BinOp::add:
      return a + b;
    case BinOp::sub:
      return a - b;
    case BinOp::mul:
      return a * b;
    case BinOp::div:
      return a / b;
    case BinOp::pow:
      return std::pow(a, b);
    }
    return 0.0;
  }
  case NodeKind::func1:
    return n.f1(eval_node(*n.a, p));
  case NodeKind::func2:
    return n.f2(eval_node(*n.a, p), eval_node(*n.b, p));
  }
  return 0.0;
}

class Parser {
public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse_all(int& max_var) {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size())
      fail("unexpected trailing input");
    max_var = max_var_;
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression: " + msg + " at column " +
                     std::to_string(pos_ + 1) + " in '" + s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (eat('+')) {
        lhs = binary(BinOp::add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = binary(BinOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (eat('*')) {
        lhs = binary(BinOp::mul, lhs, parse_unary());
      } else if (eat('/')) {
        lhs = binary(BinOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::unary_neg;
      n->a = parse_unary();
      return n;
    }
    if (eat('+'))
      return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^'))
      return binary(BinOp::pow, base, parse_unary()); // right associative
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    if (eat('(')) {
      NodePtr e = parse_expr();
      if (!eat(')'))
        fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start)
      fail("bad number");
    pos_ += static_cast<std::size_t>(end - start);
    return make_number(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);

    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::variable;
      n->var = name[1] - '0';
      max_var_ = std::max(max_var_, n->var);
      return n;
    }
    if (name == "pi")
      return make_number(M_PI);
    if (name == "e")
      return make_number(M_E);

    if (peek() == '(') {
      for (const auto& f : kFn1) {
        if (name == f.name) {
          eat('(');
          auto n = std::make_shared<Node>();
          n->kind = NodeKind::func1;
          n->f1 = f.fn;
          n->a = parse_expr();
          if (!eat(')'))
            fail("expected ')' after " + name);
          return n;
        }
      }
      for (const auto& f : kFn2) {
        if (name == f.name) {
          eat('(');
          auto n = std::make_shared<Node>();
          n->kind = NodeKind::func2;
          n->f2 = f.fn;
          n->a = parse_expr();
          if (!eat(','))
            fail("expected ',' in " + name + "(..)");
          n->b = parse_expr();
          if (!eat(')'))
            fail("expected ')' after " + name);
          return n;
        }
      }
      fail("unknown function '" + name + "'");
    }
    fail("unknown identifier '" + name + "'");
  }

  NodePtr binary(BinOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int max_var_ = 0;
};

} // namespace

Expression::Expression(std::shared_ptr<const Node> root, int max_var,
                       std::string text)
    : root_(std::move(root)), max_var_(max_var), text_(std::move(text)) {}

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  int max_var = 0;
  NodePtr root = p.parse_all(max_var);
  return Expression(std::move(root), max_var, text);
}

double Expression::eval(std::span<const double> point) const {
  return eval_node(*root_, point);
}

ScalarField Expression::sample(const Grid& g) const {
  if (max_var_ > g.dim())
    throw DimensionError("expression '" + text_ + "' uses x" +
                         std::to_string(max_var_) + " on a " +
                         std::to_string(g.dim()) + "D grid");
  return ScalarField::from_function(
      g, [this](std::span<const double> p) { return eval(p); });
}

} // namespace moutard
