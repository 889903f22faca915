#pragma once

#include <cmath>

#include "cclab/common.hpp"

namespace cclab {

// Forward-mode scalar carrying value, gradient and Hessian. Metric,
// conformal-factor and diffeo presets are written as Dual2 expressions so
// their derivative evaluators are exact rather than finite-differenced.
struct Dual2 {
  double v = 0.0;
  Vec3 g = Vec3::Zero();
  Mat3 h = Mat3::Zero();

  Dual2() = default;
  Dual2(double value) : v(value) {}

  static Dual2 var(double x, int axis) {
    Dual2 d(x);
    d.g[axis] = 1.0;
    return d;
  }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v + b.v;
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}
inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v - b.v;
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}
inline Dual2 operator-(const Dual2& a) {
  Dual2 r;
  r.v = -a.v;
  r.g = -a.g;
  r.h = -a.h;
  return r;
}
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}

// chain rule for f(a) given f', f''
inline Dual2 chain(const Dual2& a, double f, double fp, double fpp) {
  Dual2 r;
  r.v = f;
  r.g = fp * a.g;
  r.h = fp * a.h + fpp * (a.g * a.g.transpose());
  return r;
}

inline Dual2 sin(const Dual2& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Dual2 cos(const Dual2& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Dual2 exp(const Dual2& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Dual2 log(const Dual2& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Dual2 inv(const Dual2& a) {
  const double i = 1.0 / a.v;
  return chain(a, i, -i * i, 2.0 * i * i * i);
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) { return a * inv(b); }
inline Dual2 pow(const Dual2& a, double p) {
  return chain(a, std::pow(a.v, p), p * std::pow(a.v, p - 1), p * (p - 1) * std::pow(a.v, p - 2));
}
inline Dual2 sqrt(const Dual2& a) { return pow(a, 0.5); }

// integer powers avoid pow() edge cases at a.v == 0
inline Dual2 ipow(const Dual2& a, int p) {
  Dual2 r(1.0);
  for (int i = 0; i < p; ++i) r = r * a;
  return r;
}

using ScalarExpr = std::function<Dual2(const Dual2&, const Dual2&, const Dual2&)>;

inline Dual2 eval_expr(const ScalarExpr& f, const Vec3& x) {
  return f(Dual2::var(x[0], 0), Dual2::var(x[1], 1), Dual2::var(x[2], 2));
}

}  // namespace cclab
