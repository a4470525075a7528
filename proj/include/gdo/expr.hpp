#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "gdo/common.hpp"

namespace gdo {

// Arithmetic expression AST used for custom structure functions and
// intensity-dependent couplings.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?                  -- '^' right-associative
//   base   := number | variable | named-param | '(' expr ')' | func '(' expr ')'
//   func   in {abs, sqrt, sin, cos, exp, bracket}
//
// bracket(y) = (q^y - q^{-y}) / (q - q^{-1}), with q supplied by the
// evaluation environment.

enum class ExprOp { num, var, add, sub, mul, div, pow, fabs, fsqrt, fsin, fcos, fexp, fbracket };

struct ExprNode {
  ExprOp op;
  double value = 0.0;       // num
  std::string name;         // var
  std::shared_ptr<const ExprNode> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

inline ExprPtr expr_num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::num;
  n->value = v;
  return n;
}

inline ExprPtr expr_var(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::var;
  n->name = std::move(name);
  return n;
}

inline ExprPtr expr_binary(ExprOp op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline ExprPtr expr_func(ExprOp op, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

// Environment for evaluation: variable/parameter values plus the deformation
// parameter q used by bracket().
struct ExprEnv {
  std::map<std::string, cplx> values;
  cplx q{1.0, 0.0};
};

namespace detail {

// Integer powers by repeated multiplication: keeps (x-1)^2 exactly real for
// real bases, which complex pow would pollute with rounding-level imaginary
// parts.
inline cplx pow_int(cplx base, long e) {
  if (e < 0) return 1.0 / pow_int(base, -e);
  cplx r{1.0, 0.0};
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline cplx cpow(cplx base, cplx expo) {
  if (std::abs(expo.imag()) < 1e-15) {
    const double re = expo.real();
    const double ri = std::round(re);
    if (std::abs(re - ri) < 1e-12 && std::abs(ri) <= 1024.0)
      return pow_int(base, static_cast<long>(ri));
  }
  if (base == cplx{}) return expo == cplx{} ? cplx{1.0, 0.0} : cplx{};
  return std::pow(base, expo);
}

}  // namespace detail

inline cplx expr_eval(const ExprPtr& node, const ExprEnv& env) {
  switch (node->op) {
    case ExprOp::num: return cplx{node->value, 0.0};
    case ExprOp::var: {
      auto it = env.values.find(node->name);
      if (it == env.values.end()) throw Error("expression: unbound identifier '" + node->name + "'");
      return it->second;
    }
    case ExprOp::add: return expr_eval(node->lhs, env) + expr_eval(node->rhs, env);
    case ExprOp::sub: return expr_eval(node->lhs, env) - expr_eval(node->rhs, env);
    case ExprOp::mul: return expr_eval(node->lhs, env) * expr_eval(node->rhs, env);
    case ExprOp::div: return expr_eval(node->lhs, env) / expr_eval(node->rhs, env);
    case ExprOp::pow: return detail::cpow(expr_eval(node->lhs, env), expr_eval(node->rhs, env));
    case ExprOp::fabs: return cplx{std::abs(expr_eval(node->lhs, env)), 0.0};
    case ExprOp::fsqrt: return std::sqrt(expr_eval(node->lhs, env));
    case ExprOp::fsin: return std::sin(expr_eval(node->lhs, env));
    case ExprOp::fcos: return std::cos(expr_eval(node->lhs, env));
    case ExprOp::fexp: return std::exp(expr_eval(node->lhs, env));
    case ExprOp::fbracket: {
      const cplx y = expr_eval(node->lhs, env);
      const cplx q = env.q;
      const cplx den = q - 1.0 / q;
      if (std::abs(den) < 1e-14) return y;  // q -> 1 limit of the bracket
      return (detail::cpow(q, y) - detail::cpow(q, -y)) / den;
    }
  }
  throw Error("expression: corrupt AST");
}

// Rebuilds the tree with every occurrence of a variable replaced by a
// subtree. Used to synthesize induced structure functions from couplings.
inline ExprPtr expr_subst(const ExprPtr& node, const std::string& var, const ExprPtr& repl) {
  switch (node->op) {
    case ExprOp::num: return node;
    case ExprOp::var: return node->name == var ? repl : node;
    default: {
      auto n = std::make_shared<ExprNode>(*node);
      if (node->lhs) n->lhs = expr_subst(node->lhs, var, repl);
      if (node->rhs) n->rhs = expr_subst(node->rhs, var, repl);
      return n;
    }
  }
}

inline void expr_collect_vars(const ExprPtr& node, std::set<std::string>& out) {
  if (!node) return;
  if (node->op == ExprOp::var) out.insert(node->name);
  expr_collect_vars(node->lhs, out);
  expr_collect_vars(node->rhs, out);
}

// Fully parenthesized canonical form, good enough to re-parse.
inline std::string expr_to_string(const ExprPtr& node) {
  auto bin = [&](const char* op) {
    return "(" + expr_to_string(node->lhs) + op + expr_to_string(node->rhs) + ")";
  };
  auto fn = [&](const char* name) { return std::string(name) + "(" + expr_to_string(node->lhs) + ")"; };
  switch (node->op) {
    case ExprOp::num: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", node->value);
      return buf;
    }
    case ExprOp::var: return node->name;
    case ExprOp::add: return bin("+");
    case ExprOp::sub: return bin("-");
    case ExprOp::mul: return bin("*");
    case ExprOp::div: return bin("/");
    case ExprOp::pow: return bin("^");
    case ExprOp::fabs: return fn("abs");
    case ExprOp::fsqrt: return fn("sqrt");
    case ExprOp::fsin: return fn("sin");
    case ExprOp::fcos: return fn("cos");
    case ExprOp::fexp: return fn("exp");
    case ExprOp::fbracket: return fn("bracket");
  }
  return "?";
}

namespace detail {

class ExprParser {
 public:
  ExprParser(const std::string& src, const std::set<std::string>& vars,
             const std::map<std::string, double>& params)
      : src_(src), vars_(vars), params_(params) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("syntax error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = expr_binary(ExprOp::add, lhs, term());
      else if (eat('-')) lhs = expr_binary(ExprOp::sub, lhs, term());
      else return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (eat('*')) lhs = expr_binary(ExprOp::mul, lhs, factor());
      else if (eat('/')) lhs = expr_binary(ExprOp::div, lhs, factor());
      else return lhs;
    }
  }

  ExprPtr factor() {
    ExprPtr b = base();
    if (eat('^')) return expr_binary(ExprOp::pow, b, factor());
    return b;
  }

  ExprPtr base() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    // exponent only when unambiguously numeric: e/E followed by digits or sign+digit
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    if (pos_ == start) fail("expected number");
    return expr_num(std::stod(src_.substr(start, pos_ - start)));
  }

  ExprPtr identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string id = src_.substr(start, pos_ - start);

    static const std::map<std::string, ExprOp> kFuncs = {
        {"abs", ExprOp::fabs}, {"sqrt", ExprOp::fsqrt}, {"sin", ExprOp::fsin},
        {"cos", ExprOp::fcos}, {"exp", ExprOp::fexp},   {"bracket", ExprOp::fbracket}};
    if (auto f = kFuncs.find(id); f != kFuncs.end()) {
      if (!eat('(')) fail("expected '(' after function '" + id + "'");
      ExprPtr arg = expr();
      if (!eat(')')) fail("expected ')' closing call to '" + id + "'");
      return expr_func(f->second, arg);
    }
    if (vars_.count(id) || id == "q") return expr_var(id);
    if (auto p = params_.find(id); p != params_.end()) return expr_num(p->second);
    throw Error("unknown identifier '" + id + "' at position " + std::to_string(start));
  }

  const std::string& src_;
  const std::set<std::string> vars_;
  const std::map<std::string, double> params_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses an expression over the given variable names; any other identifier
// must appear in params (it is inlined as a constant) or parsing fails.
inline ExprPtr parse_expression(const std::string& src, const std::set<std::string>& vars,
                                const std::map<std::string, double>& params = {}) {
  return detail::ExprParser(src, vars, params).parse();
}

}  // namespace gdo
