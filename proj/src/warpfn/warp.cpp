#include "warpcurv/warp.hpp"

#include <cmath>
#include <sstream>

#include "warpcurv/errors.hpp"

namespace warpcurv {
namespace {

Jet2 builtin_jet(Builtin b, double r) {
  switch (b) {
    case Builtin::Cosh: return {std::cosh(r), std::sinh(r), std::cosh(r)};
    case Builtin::Sinh: return {std::sinh(r), std::cosh(r), std::sinh(r)};
    case Builtin::Exp: {
      const double e = std::exp(r);
      return {e, e, e};
    }
    case Builtin::Cosh2: {
      const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
      return {c, 2.0 * s, 4.0 * c};
    }
    case Builtin::Sinh2: {
      const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
      return {s, 2.0 * c, 4.0 * s};
    }
  }
  return {};
}

const char* builtin_name(Builtin b) {
  switch (b) {
    case Builtin::Cosh: return "cosh(r)";
    case Builtin::Sinh: return "sinh(r)";
    case Builtin::Exp: return "exp(r)";
    case Builtin::Cosh2: return "cosh(2*r)";
    case Builtin::Sinh2: return "sinh(2*r)";
  }
  return "?";
}

// One Richardson step on central differences: O(step^4) truncation.
Jet2 richardson_jet(const std::function<double(double)>& f, double r) {
  constexpr double step = 1e-3;
  const double f0 = f(r);
  auto d1 = [&](double s) { return (f(r + s) - f(r - s)) / (2.0 * s); };
  auto d2 = [&](double s) { return (f(r + s) - 2.0 * f0 + f(r - s)) / (s * s); };
  const double first = (4.0 * d1(step / 2) - d1(step)) / 3.0;
  const double second = (4.0 * d2(step / 2) - d2(step)) / 3.0;
  return {f0, first, second};
}

}  // namespace

WarpFunction WarpFunction::builtin(Builtin b) { return WarpFunction(Source{b}); }

WarpFunction WarpFunction::expression(std::string_view text) { return from_ast(expr::parse(text)); }

WarpFunction WarpFunction::from_ast(expr::NodePtr ast) {
  if (!ast) throw ConfigError("null expression");
  return WarpFunction(Source{std::move(ast)});
}

WarpFunction WarpFunction::opaque(std::string name, Callable f) {
  if (!f) throw ConfigError("empty callable for opaque warp");
  return WarpFunction(Source{Opaque{std::move(name), std::move(f)}});
}

WarpFunction WarpFunction::with_domain(Interval domain) const {
  if (!(domain.lo < domain.hi)) throw ConfigError("empty warp domain");
  WarpFunction copy = *this;
  copy.domain_ = domain;
  return copy;
}

Jet2 WarpFunction::jet(double r) const {
  if (!domain_.contains(r)) {
    std::ostringstream os;
    os << "r = " << r << " outside domain (" << domain_.lo << ", " << domain_.hi << ") of "
       << describe();
    throw DomainError(os.str());
  }
  Jet2 out;
  if (const auto* b = std::get_if<Builtin>(&source_)) {
    out = builtin_jet(*b, r);
  } else if (const auto* ast = std::get_if<expr::NodePtr>(&source_)) {
    out = expr::evaluate(**ast, r);
  } else {
    out = richardson_jet(std::get<Opaque>(source_).f, r);
  }
  if (!out.finite()) {
    std::ostringstream os;
    os << "non-finite jet of " << describe() << " at r = " << r;
    throw NumericError(os.str());
  }
  return out;
}

std::string WarpFunction::describe() const {
  if (const auto* b = std::get_if<Builtin>(&source_)) return builtin_name(*b);
  if (const auto* ast = std::get_if<expr::NodePtr>(&source_)) return expr::to_string(**ast);
  return std::get<Opaque>(source_).name;
}

WarpFunction parse_warp(std::string_view text) { return WarpFunction::expression(text); }

Jet2 eval_jet2(const WarpFunction& f, double r) { return f.jet(r); }

AdmissibilityReport check_admissible(const WarpFunction& f, std::span<const double> grid,
                                     double tol) {
  AdmissibilityReport report;
  for (double r : grid) {
    try {
      const Jet2 j = f.jet(r);
      if (j.value <= 0.0) {
        report.violations.push_back({r, j.value, j.d1, "value <= 0"});
      } else if (j.d1 < -tol) {
        report.violations.push_back({r, j.value, j.d1, "decreasing"});
      }
    } catch (const Error& e) {
      report.violations.push_back({r, NAN, NAN, e.what()});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace warpcurv
