#pragma once

#include <cmath>

namespace warpcurv {

// Value and first two derivatives of a scalar function of one variable.
// Arithmetic propagates the product/quotient/chain rules to second order.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double v, double first, double second) : value(v), d1(first), d2(second) {}

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  bool finite() const { return std::isfinite(value) && std::isfinite(d1) && std::isfinite(d2); }

  constexpr Jet2 operator-() const { return {-value, -d1, -d2}; }

  constexpr Jet2& operator+=(const Jet2& o) {
    value += o.value;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  constexpr Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  constexpr Jet2& operator*=(const Jet2& o) {
    const double v = value * o.value;
    const double a = d1 * o.value + value * o.d1;
    const double b = d2 * o.value + 2.0 * d1 * o.d1 + value * o.d2;
    value = v;
    d1 = a;
    d2 = b;
    return *this;
  }
  constexpr Jet2& operator*=(double s) {
    value *= s;
    d1 *= s;
    d2 *= s;
    return *this;
  }
};

constexpr Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
constexpr Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
constexpr Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
constexpr Jet2 operator*(Jet2 a, double s) { return a *= s; }
constexpr Jet2 operator*(double s, Jet2 a) { return a *= s; }
constexpr Jet2 operator+(Jet2 a, double s) { return a += Jet2::constant(s); }
constexpr Jet2 operator+(double s, Jet2 a) { return a += Jet2::constant(s); }
constexpr Jet2 operator-(Jet2 a, double s) { return a -= Jet2::constant(s); }
constexpr Jet2 operator-(double s, const Jet2& a) { return Jet2::constant(s) - a; }

// Applies an outer function with derivatives (f, f', f'') at the inner value.
constexpr Jet2 compose(const Jet2& inner, double f, double fp, double fpp) {
  return {f, fp * inner.d1, fpp * inner.d1 * inner.d1 + fp * inner.d2};
}

inline Jet2 reciprocal(const Jet2& x) {
  const double inv = 1.0 / x.value;
  return compose(x, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
inline Jet2 operator/(const Jet2& a, double s) { return a * (1.0 / s); }
inline Jet2 operator/(double s, const Jet2& b) { return s * reciprocal(b); }

inline Jet2 exp(const Jet2& x) {
  const double e = std::exp(x.value);
  return compose(x, e, e, e);
}
inline Jet2 log(const Jet2& x) {
  const double inv = 1.0 / x.value;
  return compose(x, std::log(x.value), inv, -inv * inv);
}
inline Jet2 sqrt(const Jet2& x) {
  const double s = std::sqrt(x.value);
  return compose(x, s, 0.5 / s, -0.25 / (s * x.value));
}
inline Jet2 sinh(const Jet2& x) {
  return compose(x, std::sinh(x.value), std::cosh(x.value), std::sinh(x.value));
}
inline Jet2 cosh(const Jet2& x) {
  return compose(x, std::cosh(x.value), std::sinh(x.value), std::cosh(x.value));
}
inline Jet2 tanh(const Jet2& x) {
  const double t = std::tanh(x.value);
  const double sech2 = 1.0 - t * t;
  return compose(x, t, sech2, -2.0 * t * sech2);
}

// x^c for a constant real exponent. Integer exponents accept negative bases.
inline Jet2 pow(const Jet2& x, double c) {
  if (c == 0.0) return Jet2::constant(1.0);
  if (c == 1.0) return x;
  if (c == 2.0) return x * x;
  const double f = std::pow(x.value, c);
  const double fp = c * std::pow(x.value, c - 1.0);
  const double fpp = c * (c - 1.0) * std::pow(x.value, c - 2.0);
  return compose(x, f, fp, fpp);
}

// General power through exp(b log a); requires a > 0.
inline Jet2 pow(const Jet2& a, const Jet2& b) { return exp(b * log(a)); }

}  // namespace warpcurv
