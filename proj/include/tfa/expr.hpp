#pragma once

// Small expression language for user-supplied parametrizations and scalar
// functions: numbers, named variables, + - * / ^, unary minus, parentheses and
//   sin cos tan sec csc cot exp log sqrt sinh cosh tanh atan abs
// plus the constants pi and e. Expressions evaluate on any dual scalar.

#include <memory>
#include <string>
#include <vector>

#include "tfa/error.hpp"
#include "tfa/smooth_map.hpp"

namespace tfa {

class Expression {
 public:
  enum class Op { number, variable, add, sub, mul, div, pow, neg, call };
  enum class Fn { sin, cos, tan, sec, csc, cot, exp, log, sqrt, sinh, cosh, tanh, atan, abs };

  struct Node {
    Op op;
    double value = 0.0;
    int var = -1;
    Fn fn = Fn::sin;
    int lhs = -1;
    int rhs = -1;
  };

  // Throws ErrorKind::parse with the 1-based column of the problem.
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  const std::string& text() const { return text_; }

  template <class S>
  S eval(const Vec<S>& vars) const {
    return eval_node(root_, vars);
  }

 private:
  template <class S>
  S eval_node(int idx, const Vec<S>& vars) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case Op::number: return S(n.value);
      case Op::variable: return vars[static_cast<std::size_t>(n.var)];
      case Op::add: return eval_node(n.lhs, vars) + eval_node(n.rhs, vars);
      case Op::sub: return eval_node(n.lhs, vars) - eval_node(n.rhs, vars);
      case Op::mul: return eval_node(n.lhs, vars) * eval_node(n.rhs, vars);
      case Op::div: return eval_node(n.lhs, vars) / eval_node(n.rhs, vars);
      case Op::neg: return -eval_node(n.lhs, vars);
      case Op::pow: {
        const Node& e = nodes_[static_cast<std::size_t>(n.rhs)];
        if (e.op == Op::number) return pow(eval_node(n.lhs, vars), e.value);
        return pow(eval_node(n.lhs, vars), eval_node(n.rhs, vars));
      }
      case Op::call: {
        const S a = eval_node(n.lhs, vars);
        switch (n.fn) {
          case Fn::sin: return sin(a);
          case Fn::cos: return cos(a);
          case Fn::tan: return tan(a);
          case Fn::sec: return S(1.0) / cos(a);
          case Fn::csc: return S(1.0) / sin(a);
          case Fn::cot: return cos(a) / sin(a);
          case Fn::exp: return exp(a);
          case Fn::log: return log(a);
          case Fn::sqrt: return sqrt(a);
          case Fn::sinh: return sinh(a);
          case Fn::cosh: return cosh(a);
          case Fn::tanh: return tanh(a);
          case Fn::atan: return atan(a);
          case Fn::abs: return abs(a);
        }
      }
    }
    return S(0.0);
  }

  friend class ExpressionParser;
  std::string text_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// One expression per output component, sharing the variable list.
SmoothMap compile_expressions(const std::vector<std::string>& components,
                              const std::vector<std::string>& variables);

}  // namespace tfa
