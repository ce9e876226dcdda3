#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "warpcurv/jet.hpp"

namespace warpcurv {

namespace expr {

enum class Func { Cosh, Sinh, Tanh, Exp, Log, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  double number = 0.0;
  Func func = Func::Exp;
  NodePtr lhs;
  NodePtr rhs;

  bool is_constant() const { return kind == Kind::Number; }
};

// Parses the warp grammar (see README) into a constant-folded AST.
// Throws ParseError carrying the byte offset of the problem.
NodePtr parse(std::string_view text);

// Forward-mode evaluation at r. Throws DomainError for log/sqrt of
// non-positive arguments and for division by zero.
Jet2 evaluate(const Node& node, double r);

// Fully parenthesised rendering that re-parses to the same AST.
std::string to_string(const Node& node);

std::string_view func_name(Func f);

}  // namespace expr

// Open interval (lo, hi) of admissible r.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double r) const { return r > lo && r < hi; }
};

enum class Builtin { Cosh, Sinh, Exp, Cosh2, Sinh2 };

// Positive warping function of r. Immutable; evaluation is pure.
class WarpFunction {
 public:
  using Callable = std::function<double(double)>;

  static WarpFunction builtin(Builtin b);
  static WarpFunction expression(std::string_view text);
  static WarpFunction from_ast(expr::NodePtr ast);
  // Black-box function; derivatives come from Richardson-extrapolated
  // central differences.
  static WarpFunction opaque(std::string name, Callable f);

  WarpFunction with_domain(Interval domain) const;

  // (f(r), f'(r), f''(r)). Throws DomainError outside the domain and
  // NumericError on non-finite results.
  Jet2 jet(double r) const;

  // Builtin name or the printed expression.
  std::string describe() const;
  bool exact_derivatives() const { return !std::holds_alternative<Opaque>(source_); }
  const Interval& domain() const { return domain_; }
  const expr::NodePtr* ast() const { return std::get_if<expr::NodePtr>(&source_); }

 private:
  struct Opaque {
    std::string name;
    Callable f;
  };
  using Source = std::variant<Builtin, expr::NodePtr, Opaque>;

  explicit WarpFunction(Source s) : source_(std::move(s)) {}

  Source source_;
  Interval domain_{};
};

WarpFunction parse_warp(std::string_view text);
Jet2 eval_jet2(const WarpFunction& f, double r);

struct AdmissibilityViolation {
  double r = 0.0;
  double value = 0.0;
  double d1 = 0.0;
  std::string reason;
};

struct AdmissibilityReport {
  bool ok = true;
  std::vector<AdmissibilityViolation> violations;
};

// Flags grid points where f <= 0 or f' < -tol. Evaluation failures are
// reported as violations rather than thrown.
AdmissibilityReport check_admissible(const WarpFunction& f, std::span<const double> grid,
                                     double tol = 1e-12);

}  // namespace warpcurv
