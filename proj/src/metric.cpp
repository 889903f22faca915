#include "cclab/metric.hpp"

#include <cmath>
#include <sstream>

namespace cclab {

double MetricField::sqrt_det(const Vec3& x) const {
  const double det = value(x).determinant();
  if (det <= 0.0) throw geometry_error("metric determinant not positive");
  return std::sqrt(det);
}

namespace {

// 4th-order stencils for sampling a matrix-valued evaluator. The normal axis
// switches to one-sided stencils within two steps of a face.
struct StencilPoint {
  double offset;
  double weight;
};

std::vector<StencilPoint> axis_stencil_first(double x, double h, bool clamp) {
  std::vector<double> offs;
  if (!clamp || (x - 2 * h >= 0.0 && x + 2 * h <= 1.0)) {
    offs = {-2 * h, -h, h, 2 * h};
  } else {
    // one-sided window of 5 nodes inside [0,1]
    const double base = x - 2 * h < 0.0 ? 0.0 : 1.0 - 4 * h;
    offs = {base - x, base - x + h, base - x + 2 * h, base - x + 3 * h, base - x + 4 * h};
  }
  std::vector<double> xs(offs.size());
  for (std::size_t i = 0; i < offs.size(); ++i) xs[i] = offs[i];
  const auto w = fd_weights(0.0, xs, 1);
  std::vector<StencilPoint> st;
  for (std::size_t i = 0; i < offs.size(); ++i)
    if (w[i] != 0.0) st.push_back({offs[i], w[i]});
  return st;
}

}  // namespace

MetricField MetricField::with_fd_derivatives(std::function<Mat3(const Vec3&)> value,
                                             double step, bool periodic,
                                             std::string tag) {
  MetricField m;
  m.value = value;
  m.periodic = periodic;
  m.tag = std::move(tag);
  const double h = step;
  auto d1 = [value, h](const Vec3& x) {
    Deriv1 out;
    for (int k = 0; k < 3; ++k) {
      const bool clamp = (k == 2);
      auto st = axis_stencil_first(x[k], h, clamp);
      Mat3 acc = Mat3::Zero();
      for (const auto& p : st) {
        Vec3 xp = x;
        xp[k] += p.offset;
        acc += p.weight * value(xp);
      }
      out[k] = acc;
    }
    return out;
  };
  m.deriv = d1;
  m.deriv2 = [d1, h](const Vec3& x) {
    Deriv2 out;
    for (int l = 0; l < 3; ++l) {
      const bool clamp = (l == 2);
      auto st = axis_stencil_first(x[l], h, clamp);
      std::array<Mat3, 3> acc{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
      for (const auto& p : st) {
        Vec3 xp = x;
        xp[l] += p.offset;
        const Deriv1 g1 = d1(xp);
        for (int k = 0; k < 3; ++k) acc[k] += p.weight * g1[k];
      }
      for (int k = 0; k < 3; ++k) out[l][k] = acc[k];
    }
    return out;
  };
  return m;
}

void MetricField::check_spd(const Grid& g) const {
  for (int iz = 0; iz <= g.nn; ++iz)
    for (int iy = 0; iy < g.nt; ++iy)
      for (int ix = 0; ix < g.nt; ++ix) {
        const Mat3 m = value(g.node(ix, iy, iz));
        Eigen::SelfAdjointEigenSolver<Mat3> es(m);
        if (es.eigenvalues().minCoeff() <= 0.0) {
          std::ostringstream os;
          os << "metric '" << tag << "' not SPD at node (" << ix << "," << iy << ","
             << iz << "), min eigenvalue " << es.eigenvalues().minCoeff();
          throw geometry_error(os.str());
        }
      }
}

ConformalFactor ConformalFactor::one() {
  ConformalFactor f;
  f.mu = [](const Vec3&) { return 0.0; };
  f.mu_grad = [](const Vec3&) { return Vec3::Zero(); };
  f.mu_hess = [](const Vec3&) { return Mat3::Zero(); };
  f.boundary_unit = true;
  f.boundary_flat = true;
  f.tag = "one";
  return f;
}

void ConformalFactor::check_gauge(const Grid& g, double tol) const {
  double worst_c = 0.0, worst_dc = 0.0;
  for (int f = 0; f < 2; ++f)
    for (int iy = 0; iy < g.nt; ++iy)
      for (int ix = 0; ix < g.nt; ++ix) {
        const Vec3 x = g.face_node(f, ix, iy);
        worst_c = std::max(worst_c, std::abs(c(x) - 1.0));
        worst_dc = std::max(worst_dc, std::abs(c_grad(x)[2]));
      }
  if (boundary_unit && worst_c > tol)
    throw precondition_error("conformal factor flagged boundary_unit but |c-1| = " +
                             std::to_string(worst_c) + " on a face");
  if (boundary_flat && worst_dc > tol)
    throw precondition_error("conformal factor flagged boundary_flat but |dc/dn| = " +
                             std::to_string(worst_dc) + " on a face");
}

DiffeoField DiffeoField::identity() {
  DiffeoField f;
  f.value = [](const Vec3& x) { return x; };
  f.jacobian = [](const Vec3&) { return Mat3::Identity(); };
  f.hessian = [](const Vec3&) {
    return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  };
  f.boundary_fixing = true;
  f.tag = "identity";
  return f;
}

Vec3 DiffeoField::inverse(const Vec3& y, double tol) const {
  Vec3 x = y;
  for (int it = 0; it < 60; ++it) {
    Vec3 r = value(x) - y;
    // compare tangential coordinates on the torus
    for (int k = 0; k < 2; ++k) r[k] -= std::round(r[k]);
    if (r.norm() < tol) return x;
    const Mat3 J = jacobian(x);
    Vec3 dx = J.partialPivLu().solve(r);
    double damp = 1.0;
    if (dx.norm() > 0.25) damp = 0.25 / dx.norm();
    x -= damp * dx;
    if (x[2] < 0.0) x[2] = 0.0;
    if (x[2] > 1.0) x[2] = 1.0;
  }
  throw geometry_error("diffeo inversion did not converge");
}

void DiffeoField::check_jacobian(const Grid& g) const {
  for (int iz = 0; iz <= g.nn; ++iz)
    for (int iy = 0; iy < g.nt; ++iy)
      for (int ix = 0; ix < g.nt; ++ix) {
        const Vec3 x = g.node(ix, iy, iz);
        if (jacobian(x).determinant() <= 0.0) {
          std::ostringstream os;
          os << "diffeo '" << tag << "' has nonpositive Jacobian at node (" << ix
             << "," << iy << "," << iz << ")";
          throw geometry_error(os.str());
        }
        if (boundary_fixing && g.is_boundary_layer(iz)) {
          Vec3 r = value(x) - x;
          for (int k = 0; k < 2; ++k) r[k] -= std::round(r[k]);
          if (r.norm() > 1e-12)
            throw geometry_error("diffeo flagged boundary_fixing but moves a face node");
        }
      }
}

std::array<Mat3, 3> christoffel(const MetricField& metric, const Vec3& x) {
  const Mat3 g = metric.value(x);
  Eigen::SelfAdjointEigenSolver<Mat3> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw geometry_error("christoffel: metric not SPD at query point");
  const Mat3 ginv = g.inverse();
  const Deriv1 dg = metric.deriv(x);
  std::array<Mat3, 3> gamma;
  for (int l = 0; l < 3; ++l) gamma[l] = Mat3::Zero();
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j)
      for (int k = j; k < 3; ++k) {
        double s = 0.0;
        for (int m = 0; m < 3; ++m)
          s += ginv(l, m) * (dg[j](k, m) + dg[k](j, m) - dg[m](j, k));
        s *= 0.5;
        gamma[l](j, k) = s;
        gamma[l](k, j) = s;
      }
  return gamma;
}

double scalar_curvature(const MetricField& metric, const Vec3& x) {
  const Mat3 g = metric.value(x);
  const Mat3 ginv = g.inverse();
  const Deriv1 dg = metric.deriv(x);
  const Deriv2 ddg = metric.deriv2(x);

  // Gamma and d_m Gamma from dg, ddg
  std::array<Mat3, 3> gamma = christoffel(metric, x);
  // d_m ginv = -ginv dg[m] ginv
  std::array<Mat3, 3> dginv;
  for (int m = 0; m < 3; ++m) dginv[m] = -ginv * dg[m] * ginv;

  // dGamma[m][l](j,k) = d_m Gamma^l_{jk}
  std::array<std::array<Mat3, 3>, 3> dgamma;
  for (int m = 0; m < 3; ++m)
    for (int l = 0; l < 3; ++l) {
      dgamma[m][l] = Mat3::Zero();
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double s = 0.0;
          for (int p = 0; p < 3; ++p) {
            s += dginv[m](l, p) * (dg[j](k, p) + dg[k](j, p) - dg[p](j, k));
            s += ginv(l, p) * (ddg[m][j](k, p) + ddg[m][k](j, p) - ddg[m][p](j, k));
          }
          dgamma[m][l](j, k) = 0.5 * s;
        }
    }

  // Ricci_{jk} = d_l Gamma^l_{jk} - d_j Gamma^l_{lk} + Gamma^l_{lm} Gamma^m_{jk}
  //              - Gamma^l_{jm} Gamma^m_{lk}
  Mat3 ricci = Mat3::Zero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int l = 0; l < 3; ++l) {
        s += dgamma[l][l](j, k) - dgamma[j][l](l, k);
        for (int m = 0; m < 3; ++m)
          s += gamma[l](l, m) * gamma[m](j, k) - gamma[l](j, m) * gamma[m](l, k);
      }
      ricci(j, k) = s;
    }
  return (ginv * ricci).trace();
}

double conformal_potential(const MetricField& metric, const Vec3& x, int n) {
  return double(n - 2) / (4.0 * (n - 1)) * scalar_curvature(metric, x);
}

MetricField conformal_rescale(const MetricField& metric, const ConformalFactor& factor) {
  MetricField out;
  auto gv = metric.value;
  auto gd = metric.deriv;
  auto gdd = metric.deriv2;
  auto mu = factor.mu;
  auto mug = factor.mu_grad;
  auto muh = factor.mu_hess;
  out.value = [gv, mu](const Vec3& x) { return std::exp(2.0 * mu(x)) * gv(x); };
  out.deriv = [gv, gd, mu, mug](const Vec3& x) {
    const double c = std::exp(2.0 * mu(x));
    const Vec3 dmu = mug(x);
    const Mat3 g = gv(x);
    Deriv1 dg = gd(x);
    Deriv1 o;
    for (int k = 0; k < 3; ++k) o[k] = c * (dg[k] + 2.0 * dmu[k] * g);
    return o;
  };
  out.deriv2 = [gv, gd, gdd, mu, mug, muh](const Vec3& x) {
    const double c = std::exp(2.0 * mu(x));
    const Vec3 dmu = mug(x);
    const Mat3 hmu = muh(x);
    const Mat3 g = gv(x);
    const Deriv1 dg = gd(x);
    const Deriv2 ddg = gdd(x);
    Deriv2 o;
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k) {
        o[l][k] = c * (ddg[l][k] + 2.0 * dmu[l] * dg[k] + 2.0 * dmu[k] * dg[l] +
                       (2.0 * hmu(l, k) + 4.0 * dmu[l] * dmu[k]) * g);
      }
    return o;
  };
  out.periodic = metric.periodic;
  out.tag = metric.tag + "*" + (factor.tag.empty() ? "c" : factor.tag);
  return out;
}

MetricField pullback_metric(const DiffeoField& diffeo, const MetricField& metric,
                            double fd_step) {
  auto F = diffeo.value;
  auto DF = diffeo.jacobian;
  auto gv = metric.value;
  auto pull = [F, DF, gv](const Vec3& x) -> Mat3 {
    const Mat3 J = DF(x);
    if (J.determinant() <= 0.0)
      throw geometry_error("pullback: Jacobian determinant not positive");
    return J.transpose() * gv(F(x)) * J;
  };
  if (diffeo.hessian) {
    // exact first derivatives; second derivatives by FD of the first
    auto HF = diffeo.hessian;
    auto gd = metric.deriv;
    auto d1 = [F, DF, HF, gv, gd](const Vec3& x) {
      const Mat3 J = DF(x);
      const auto H = HF(x);  // H[a](i,j) = d_i d_j F^a
      const Mat3 g = gv(F(x));
      const Deriv1 dg = gd(F(x));
      Deriv1 o;
      for (int k = 0; k < 3; ++k) {
        Mat3 dgF = Mat3::Zero();  // d_k [g(F(x))]
        for (int m = 0; m < 3; ++m) dgF += dg[m] * J(m, k);
        Mat3 dJ;  // d_k J, (a,i) entry = d_k d_i F^a
        for (int a = 0; a < 3; ++a)
          for (int i = 0; i < 3; ++i) dJ(a, i) = H[a](k, i);
        o[k] = dJ.transpose() * g * J + J.transpose() * dgF * J + J.transpose() * g * dJ;
      }
      return o;
    };
    MetricField out;
    out.value = pull;
    out.deriv = d1;
    const double h = fd_step;
    out.deriv2 = [d1, h](const Vec3& x) {
      Deriv2 o;
      for (int l = 0; l < 3; ++l) {
        std::vector<double> xs;
        const bool clamp = (l == 2);
        double lo = clamp ? std::max(0.0, std::min(x[l] - 2 * h, 1.0 - 4 * h)) : x[l] - 2 * h;
        for (int i = 0; i < 5; ++i) xs.push_back(lo + i * h - x[l]);
        const auto w = fd_weights(0.0, xs, 1);
        std::array<Mat3, 3> acc{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
        for (int i = 0; i < 5; ++i) {
          Vec3 xp = x;
          xp[l] += xs[i];
          const Deriv1 g1 = d1(xp);
          for (int k = 0; k < 3; ++k) acc[k] += w[i] * g1[k];
        }
        for (int k = 0; k < 3; ++k) o[l][k] = acc[k];
      }
      return o;
    };
    out.periodic = metric.periodic;
    out.tag = diffeo.tag + "^*" + metric.tag;
    return out;
  }
  return MetricField::with_fd_derivatives(pull, fd_step, metric.periodic,
                                          diffeo.tag + "^*" + metric.tag);
}

BoundaryMetric induced_boundary_metric(const MetricField& metric, int face) {
  BoundaryMetric b;
  const double xn = face == 0 ? 0.0 : 1.0;
  auto gv = metric.value;
  b.value = [gv, xn](const Eigen::Vector2d& xp) {
    const Mat3 g = gv(Vec3(xp[0], xp[1], xn));
    return Eigen::Matrix2d(g.topLeftCorner<2, 2>());
  };
  b.tag = metric.tag + (face == 0 ? "|face0" : "|face1");
  return b;
}

Vec3 inward_unit_normal(const MetricField& metric, int face, const Vec3& x) {
  const Mat3 ginv = metric.inverse(x);
  Vec3 nu = ginv.col(2) / std::sqrt(ginv(2, 2));
  return face == 0 ? nu : Vec3(-nu);
}

}  // namespace cclab
