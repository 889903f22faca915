#include "cclab/presets.hpp"

namespace cclab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

MetricField metric_from_exprs(const std::array<std::array<ScalarExpr, 3>, 3>& comps,
                              bool periodic, std::string tag) {
  auto eval_all = [comps](const Vec3& x) {
    std::array<std::array<Dual2, 3>, 3> d;
    const Dual2 x1 = Dual2::var(x[0], 0);
    const Dual2 x2 = Dual2::var(x[1], 1);
    const Dual2 xn = Dual2::var(x[2], 2);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        d[i][j] = comps[i][j](x1, x2, xn);
        d[j][i] = d[i][j];
      }
    return d;
  };
  MetricField m;
  m.value = [eval_all](const Vec3& x) {
    const auto d = eval_all(x);
    Mat3 g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = d[i][j].v;
    return g;
  };
  m.deriv = [eval_all](const Vec3& x) {
    const auto d = eval_all(x);
    Deriv1 o;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) o[k](i, j) = d[i][j].g[k];
    return o;
  };
  m.deriv2 = [eval_all](const Vec3& x) {
    const auto d = eval_all(x);
    Deriv2 o;
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) o[l][k](i, j) = d[i][j].h(l, k);
    return o;
  };
  m.periodic = periodic;
  m.tag = std::move(tag);
  return m;
}

ConformalFactor conformal_from_expr(const ScalarExpr& mu, bool boundary_unit,
                                    bool boundary_flat, std::string tag) {
  ConformalFactor f;
  f.mu = [mu](const Vec3& x) { return eval_expr(mu, x).v; };
  f.mu_grad = [mu](const Vec3& x) { return eval_expr(mu, x).g; };
  f.mu_hess = [mu](const Vec3& x) { return eval_expr(mu, x).h; };
  f.boundary_unit = boundary_unit;
  f.boundary_flat = boundary_flat;
  f.tag = std::move(tag);
  return f;
}

DiffeoField diffeo_from_exprs(const ScalarExpr& f1, const ScalarExpr& f2,
                              const ScalarExpr& f3, bool boundary_fixing,
                              std::string tag) {
  std::array<ScalarExpr, 3> fs{f1, f2, f3};
  auto eval_all = [fs](const Vec3& x) {
    std::array<Dual2, 3> d;
    const Dual2 x1 = Dual2::var(x[0], 0);
    const Dual2 x2 = Dual2::var(x[1], 1);
    const Dual2 xn = Dual2::var(x[2], 2);
    for (int a = 0; a < 3; ++a) d[a] = fs[a](x1, x2, xn);
    return d;
  };
  DiffeoField f;
  f.value = [eval_all](const Vec3& x) {
    const auto d = eval_all(x);
    return Vec3(d[0].v, d[1].v, d[2].v);
  };
  f.jacobian = [eval_all](const Vec3& x) {
    const auto d = eval_all(x);
    Mat3 J;
    for (int a = 0; a < 3; ++a) J.row(a) = d[a].g.transpose();
    return J;
  };
  f.hessian = [eval_all](const Vec3& x) {
    const auto d = eval_all(x);
    return std::array<Mat3, 3>{d[0].h, d[1].h, d[2].h};
  };
  f.boundary_fixing = boundary_fixing;
  f.tag = std::move(tag);
  return f;
}

namespace {

ScalarExpr zero_expr() {
  return [](const Dual2&, const Dual2&, const Dual2&) { return Dual2(0.0); };
}
ScalarExpr one_expr() {
  return [](const Dual2&, const Dual2&, const Dual2&) { return Dual2(1.0); };
}

std::array<std::array<ScalarExpr, 3>, 3> diagonal_exprs(const ScalarExpr& tang,
                                                        const ScalarExpr& norm) {
  std::array<std::array<ScalarExpr, 3>, 3> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = zero_expr();
  c[0][0] = tang;
  c[1][1] = tang;
  c[2][2] = norm;
  return c;
}

}  // namespace

MetricField make_flat_metric() {
  return metric_from_exprs(diagonal_exprs(one_expr(), one_expr()), true, "flat");
}

MetricField make_conformal_flat_metric(double amp) {
  // mu = amp sin(2 pi x1) sin(pi xn) xn^2
  ScalarExpr cf = [amp](const Dual2& x1, const Dual2&, const Dual2& xn) {
    const Dual2 mu = Dual2(amp) * sin(Dual2(kTwoPi) * x1) * sin(Dual2(M_PI) * xn) * xn * xn;
    return exp(Dual2(2.0) * mu);
  };
  return metric_from_exprs(diagonal_exprs(cf, cf), true, "conformal_flat");
}

MetricField make_warped_metric(double c1, double c2, double c3) {
  ScalarExpr tang = [c1, c2, c3](const Dual2&, const Dual2&, const Dual2& xn) {
    const Dual2 phi = Dual2(c1) * xn + Dual2(c2) * xn * xn + Dual2(c3) * xn * xn * xn;
    return exp(Dual2(2.0) * phi);
  };
  return metric_from_exprs(diagonal_exprs(tang, one_expr()), true, "warped");
}

MetricField make_wavy_warp_metric(double c1, double c2, double c3, double amp) {
  ScalarExpr tang = [c1, c2, c3, amp](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    const Dual2 mod = Dual2(1.0) + Dual2(amp) * cos(Dual2(kTwoPi) * x1) * sin(Dual2(kTwoPi) * x2 + Dual2(0.7));
    const Dual2 phi = (Dual2(c1) * xn + Dual2(c2) * xn * xn + Dual2(c3) * xn * xn * xn) * mod;
    return exp(Dual2(2.0) * phi);
  };
  return metric_from_exprs(diagonal_exprs(tang, one_expr()), true, "wavy_warp");
}

MetricField make_tangential_wave_metric(double amp, double off_amp) {
  ScalarExpr p = [](const Dual2&, const Dual2&, const Dual2& xn) {
    return Dual2(1.0) + Dual2(0.5) * xn * xn;
  };
  auto c = diagonal_exprs(zero_expr(), one_expr());
  c[0][0] = [amp, p](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    return Dual2(1.0) + Dual2(amp) * sin(Dual2(kTwoPi) * x1) * cos(Dual2(kTwoPi) * x2) * p(x1, x2, xn);
  };
  c[1][1] = [amp, p](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    return Dual2(1.0) - Dual2(amp) * cos(Dual2(kTwoPi) * x1) * sin(Dual2(kTwoPi) * x2) * p(x1, x2, xn);
  };
  c[0][1] = [off_amp, p](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    return Dual2(off_amp) * sin(Dual2(kTwoPi) * x1) * sin(Dual2(kTwoPi) * x2) * p(x1, x2, xn);
  };
  return metric_from_exprs(c, true, "tangential_wave");
}

MetricField make_sheared_metric(double amp) {
  auto c = diagonal_exprs(one_expr(), one_expr());
  c[0][2] = [amp](const Dual2& x1, const Dual2&, const Dual2& xn) {
    return Dual2(amp) * sin(Dual2(kTwoPi) * x1) * xn * (Dual2(1.0) - xn);
  };
  return metric_from_exprs(c, true, "sheared");
}

MetricField make_sphere_patch_metric() {
  // unit round 3-sphere in a stereographic chart centered in the slab
  ScalarExpr cf = [](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    const Dual2 r2 = ipow(x1 - Dual2(0.5), 2) + ipow(x2 - Dual2(0.5), 2) + ipow(xn - Dual2(0.5), 2);
    return ipow(inv(Dual2(1.0) + r2), 2) * Dual2(4.0);
  };
  return metric_from_exprs(diagonal_exprs(cf, cf), false, "sphere_patch");
}

ConformalFactor make_constant_factor(double c0) {
  if (c0 <= 0.0) throw precondition_error("conformal factor must be positive");
  const double mu0 = 0.5 * std::log(c0);
  ScalarExpr mu = [mu0](const Dual2&, const Dual2&, const Dual2&) { return Dual2(mu0); };
  return conformal_from_expr(mu, c0 == 1.0, true, "constant");
}

ConformalFactor make_gauge_wave_factor(double amp) {
  ScalarExpr mu = [amp](const Dual2& x1, const Dual2&, const Dual2& xn) {
    const Dual2 w = xn * xn * ipow(Dual2(1.0) - xn, 2);
    return Dual2(amp) * w * sin(Dual2(kTwoPi) * x1);
  };
  return conformal_from_expr(mu, true, true, "gauge_wave");
}

ConformalFactor make_gauge_wave2_factor(double amp) {
  ScalarExpr mu = [amp](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    const Dual2 w = xn * xn * ipow(Dual2(1.0) - xn, 2);
    return Dual2(amp) * w * (cos(Dual2(kTwoPi) * x2) + Dual2(0.3) * sin(Dual2(kTwoPi) * x1));
  };
  return conformal_from_expr(mu, true, true, "gauge_wave2");
}

ConformalFactor make_cubic_collar_factor(double amp) {
  ScalarExpr mu = [amp](const Dual2& x1, const Dual2&, const Dual2& xn) {
    const Dual2 w = ipow(xn, 3) * ipow(Dual2(1.0) - xn, 3);
    return Dual2(amp) * w * (Dual2(1.0) + Dual2(0.5) * sin(Dual2(kTwoPi) * x1));
  };
  return conformal_from_expr(mu, true, true, "cubic_collar");
}

ConformalFactor make_linear_defect_factor(double amp) {
  ScalarExpr mu = [amp](const Dual2& x1, const Dual2&, const Dual2& xn) {
    return Dual2(amp) * xn * (Dual2(1.0) - xn) * (Dual2(1.0) + Dual2(0.4) * cos(Dual2(kTwoPi) * x1));
  };
  return conformal_from_expr(mu, true, false, "linear_defect");
}

ConformalFactor make_generic_factor(double amp) {
  ScalarExpr mu = [amp](const Dual2& x1, const Dual2&, const Dual2& xn) {
    return Dual2(amp) * sin(Dual2(kTwoPi) * x1) * sin(Dual2(M_PI) * xn) * xn * xn;
  };
  return conformal_from_expr(mu, false, false, "generic");
}

DiffeoField make_collar_wave_diffeo(double ax, double ay, double an) {
  auto beta = [](const Dual2& xn) { return xn * xn * ipow(Dual2(1.0) - xn, 2); };
  ScalarExpr f1 = [ax, beta](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    return x1 + Dual2(ax) * beta(xn) * sin(Dual2(kTwoPi) * x2);
  };
  ScalarExpr f2 = [ay, beta](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    return x2 + Dual2(ay) * beta(xn) * sin(Dual2(kTwoPi) * x1);
  };
  ScalarExpr f3 = [an, beta](const Dual2& x1, const Dual2& x2, const Dual2& xn) {
    return xn + Dual2(an) * beta(xn) * sin(Dual2(kTwoPi) * x1) * sin(Dual2(kTwoPi) * x2);
  };
  return diffeo_from_exprs(f1, f2, f3, true, "collar_wave");
}

std::function<double(const Vec3&)> make_test_field(int which) {
  switch (which % 3) {
    case 0:
      return [](const Vec3& x) {
        return std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]) * (1.0 + x[2] * x[2]) + 0.5 * x[2];
      };
    case 1:
      return [](const Vec3& x) {
        return std::cos(kTwoPi * (x[0] + x[1])) * std::exp(x[2]) + x[2] * x[2] * x[2];
      };
    default:
      return [](const Vec3& x) {
        return 1.0 + std::sin(kTwoPi * x[1]) * x[2] * (1.0 - x[2]) + 0.25 * std::cos(kTwoPi * x[0]);
      };
  }
}

}  // namespace cclab
