#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "warpcurv/errors.hpp"
#include "warpcurv/warp.hpp"

namespace warpcurv::expr {
namespace {

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->number = v;
  return n;
}

NodePtr make_variable() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  return n;
}

std::optional<Func> lookup_func(std::string_view name) {
  if (name == "cosh") return Func::Cosh;
  if (name == "sinh") return Func::Sinh;
  if (name == "tanh") return Func::Tanh;
  if (name == "exp") return Func::Exp;
  if (name == "log") return Func::Log;
  if (name == "sqrt") return Func::Sqrt;
  return std::nullopt;
}

std::optional<double> lookup_constant(std::string_view name) {
  if (name == "pi") return std::numbers::pi;
  if (name == "e") return std::numbers::e;
  return std::nullopt;
}

Jet2 apply(Func f, const Jet2& x) {
  switch (f) {
    case Func::Cosh: return cosh(x);
    case Func::Sinh: return sinh(x);
    case Func::Tanh: return tanh(x);
    case Func::Exp: return exp(x);
    case Func::Log:
      if (!(x.value > 0.0)) throw DomainError("log of non-positive argument");
      return log(x);
    case Func::Sqrt:
      if (x.value < 0.0) throw DomainError("sqrt of negative argument");
      return sqrt(x);
  }
  return x;
}

bool is_integer(double c) { return std::isfinite(c) && std::floor(c) == c; }

Jet2 power(const Jet2& base, const Node& exponent, double r) {
  if (exponent.is_constant()) {
    const double c = exponent.number;
    if (base.value < 0.0 && !is_integer(c)) {
      throw DomainError("non-integer power of negative base");
    }
    return pow(base, c);
  }
  const Jet2 e = evaluate(exponent, r);
  if (!(base.value > 0.0)) throw DomainError("variable exponent needs a positive base");
  return pow(base, e);
}

// Folds a node whose children are all constants, leaving anything that would
// raise at evaluation time (1/0, log(-1)) for lazy detection.
NodePtr fold(NodePtr n) {
  const bool lhs_const = n->lhs && n->lhs->is_constant();
  const bool rhs_const = n->rhs && n->rhs->is_constant();
  bool foldable = false;
  switch (n->kind) {
    case Node::Kind::Negate:
    case Node::Kind::Call: foldable = lhs_const; break;
    case Node::Kind::Add:
    case Node::Kind::Sub:
    case Node::Kind::Mul:
    case Node::Kind::Div:
    case Node::Kind::Pow: foldable = lhs_const && rhs_const; break;
    default: break;
  }
  if (!foldable) return n;
  try {
    const Jet2 v = evaluate(*n, 0.0);
    if (!std::isfinite(v.value)) return n;
    return make_number(v.value);
  } catch (const Error&) {
    return n;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError("syntax error at position " + std::to_string(at) + ": " + what,
                     std::string(text_), at);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return fold(std::move(n));
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Node::Kind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Node::Kind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Node::Kind::Mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = binary(Node::Kind::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  // factor := ('-'|'+') factor | base ('^' factor)?
  NodePtr parse_factor() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Negate;
      n->lhs = parse_factor();
      return fold(std::move(n));
    }
    if (accept('+')) return parse_factor();
    NodePtr base = parse_base();
    if (accept('^')) return binary(Node::Kind::Pow, base, parse_factor());
    return base;
  }

  NodePtr parse_base() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc() || ptr == first) fail_at("malformed number", start);
    pos_ += static_cast<std::size_t>(ptr - first);
    return make_number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "r") return make_variable();
    if (auto k = lookup_constant(name)) return make_number(*k);
    if (auto f = lookup_func(name)) {
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->func = *f;
      n->lhs = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return fold(std::move(n));
    }
    fail_at("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  std::string s(buf, ptr);
  if (v < 0.0) return "(" + s + ")";
  return s;
}

}  // namespace

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Cosh: return "cosh";
    case Func::Sinh: return "sinh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

NodePtr parse(std::string_view text) { return Parser(text).parse_all(); }

Jet2 evaluate(const Node& node, double r) {
  switch (node.kind) {
    case Node::Kind::Number: return Jet2::constant(node.number);
    case Node::Kind::Variable: return Jet2::variable(r);
    case Node::Kind::Negate: return -evaluate(*node.lhs, r);
    case Node::Kind::Add: return evaluate(*node.lhs, r) + evaluate(*node.rhs, r);
    case Node::Kind::Sub: return evaluate(*node.lhs, r) - evaluate(*node.rhs, r);
    case Node::Kind::Mul: return evaluate(*node.lhs, r) * evaluate(*node.rhs, r);
    case Node::Kind::Div: {
      const Jet2 den = evaluate(*node.rhs, r);
      if (den.value == 0.0) throw DomainError("division by zero");
      return evaluate(*node.lhs, r) / den;
    }
    case Node::Kind::Pow: return power(evaluate(*node.lhs, r), *node.rhs, r);
    case Node::Kind::Call: return apply(node.func, evaluate(*node.lhs, r));
  }
  return {};
}

std::string to_string(const Node& node) {
  switch (node.kind) {
    case Node::Kind::Number: return format_number(node.number);
    case Node::Kind::Variable: return "r";
    case Node::Kind::Negate: return "(-" + to_string(*node.lhs) + ")";
    case Node::Kind::Add: return "(" + to_string(*node.lhs) + " + " + to_string(*node.rhs) + ")";
    case Node::Kind::Sub: return "(" + to_string(*node.lhs) + " - " + to_string(*node.rhs) + ")";
    case Node::Kind::Mul: return "(" + to_string(*node.lhs) + "*" + to_string(*node.rhs) + ")";
    case Node::Kind::Div: return "(" + to_string(*node.lhs) + "/" + to_string(*node.rhs) + ")";
    case Node::Kind::Pow: return "(" + to_string(*node.lhs) + "^" + to_string(*node.rhs) + ")";
    case Node::Kind::Call:
      return std::string(func_name(node.func)) + "(" + to_string(*node.lhs) + ")";
  }
  return {};
}

}  // namespace warpcurv::expr
