#include "tfa/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

namespace tfa {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  Expression run() {
    Expression e;
    e.text_ = text_;
    out_ = &e;
    e.root_ = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  using Op = Expression::Op;
  using Fn = Expression::Fn;

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::parse, "expression '" + text_ + "', column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  int push(Expression::Node n) {
    out_->nodes_.push_back(n);
    return static_cast<int>(out_->nodes_.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = push({Op::add, 0.0, -1, Fn::sin, lhs, parse_product()});
      } else if (accept('-')) {
        lhs = push({Op::sub, 0.0, -1, Fn::sin, lhs, parse_product()});
      } else {
        return lhs;
      }
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push({Op::mul, 0.0, -1, Fn::sin, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = push({Op::div, 0.0, -1, Fn::sin, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return push({Op::neg, 0.0, -1, Fn::sin, parse_unary(), -1});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_atom();
    if (accept('^')) {
      // right associative; exponent may carry its own sign
      int exponent = parse_unary();
      return push({Op::pow, 0.0, -1, Fn::sin, base, exponent});
    }
    return base;
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_sum();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        error("malformed number");
      }
      pos_ += used;
      return push({Op::number, v, -1, Fn::sin, -1, -1});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string id = text_.substr(start, pos_ - start);
      static const std::map<std::string, Fn> fns = {
          {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},   {"sec", Fn::sec},
          {"csc", Fn::csc},   {"cot", Fn::cot},   {"exp", Fn::exp},   {"log", Fn::log},
          {"sqrt", Fn::sqrt}, {"sinh", Fn::sinh}, {"cosh", Fn::cosh}, {"tanh", Fn::tanh},
          {"atan", Fn::atan}, {"abs", Fn::abs}};
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == id) return push({Op::variable, 0.0, static_cast<int>(i), Fn::sin, -1, -1});
      }
      if (auto it = fns.find(id); it != fns.end()) {
        if (!accept('(')) error("expected '(' after " + id);
        int arg = parse_sum();
        if (!accept(')')) error("expected ')'");
        return push({Op::call, 0.0, -1, it->second, arg, -1});
      }
      if (id == "pi") return push({Op::number, std::numbers::pi, -1, Fn::sin, -1, -1});
      if (id == "e") return push({Op::number, std::numbers::e, -1, Fn::sin, -1, -1});
      pos_ = start;
      error("unknown identifier '" + id + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  return ExpressionParser(text, variables).run();
}

SmoothMap compile_expressions(const std::vector<std::string>& components,
                              const std::vector<std::string>& variables) {
  std::vector<Expression> exprs;
  exprs.reserve(components.size());
  for (const std::string& c : components) exprs.push_back(Expression::parse(c, variables));
  return SmoothMap(static_cast<int>(variables.size()), static_cast<int>(exprs.size()),
                   [exprs](const auto& x) {
                     using S = typename std::decay_t<decltype(x)>::value_type;
                     Vec<S> out;
                     out.reserve(exprs.size());
                     for (const Expression& e : exprs) out.push_back(e.eval(x));
                     return out;
                   });
}

}  // namespace tfa
