#pragma once

#include <array>
#include <optional>

#include "cclab/grid.hpp"

namespace cclab {

using Deriv1 = std::array<Mat3, 3>;                 // d_k g
using Deriv2 = std::array<std::array<Mat3, 3>, 3>;  // d_k d_l g

// Smooth SPD matrix field on the slab. Evaluators may be called at arbitrary
// points (not just nodes); derivative evaluators are exact for closed-form
// presets and finite-difference fallbacks otherwise.
struct MetricField {
  std::function<Mat3(const Vec3&)> value;
  std::function<Deriv1(const Vec3&)> deriv;
  std::function<Deriv2(const Vec3&)> deriv2;
  bool periodic = true;
  std::string tag;

  Mat3 operator()(const Vec3& x) const { return value(x); }
  Mat3 inverse(const Vec3& x) const { return value(x).inverse(); }
  double sqrt_det(const Vec3& x) const;

  // Installs 4th-order FD derivative evaluators built from `value`; the
  // normal-axis stencils go one-sided near the faces.
  static MetricField with_fd_derivatives(std::function<Mat3(const Vec3&)> value,
                                         double step, bool periodic,
                                         std::string tag);

  // Throws geometry_error naming the first node where g is not SPD.
  void check_spd(const Grid& g) const;
};

// Positive conformal factor c = e^{2 mu} together with its gauge flags.
struct ConformalFactor {
  std::function<double(const Vec3&)> mu;
  std::function<Vec3(const Vec3&)> mu_grad;
  std::function<Mat3(const Vec3&)> mu_hess;
  bool boundary_unit = false;  // c == 1 on both faces
  bool boundary_flat = false;  // normal derivative of c vanishes on both faces
  std::string tag;

  double c(const Vec3& x) const { return std::exp(2.0 * mu(x)); }
  Vec3 c_grad(const Vec3& x) const { return 2.0 * c(x) * mu_grad(x); }

  static ConformalFactor one();
  // Verifies the gauge flags on the faces of `g` against `tol`.
  void check_gauge(const Grid& g, double tol = 1e-12) const;
};

// Diffeomorphism of the slab. `hessian[a]` is the matrix of second partials
// of component a when available; otherwise pullback derivatives fall back to
// finite differences.
struct DiffeoField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> jacobian;  // J(i,j) = d_j F^i
  std::function<std::array<Mat3, 3>(const Vec3&)> hessian;
  bool boundary_fixing = false;
  std::string tag;

  Vec3 operator()(const Vec3& x) const { return value(x); }

  // Newton inversion with the exact Jacobian; tangential coordinates are
  // compared modulo 1.
  Vec3 inverse(const Vec3& y, double tol = 1e-13) const;

  static DiffeoField identity();
  void check_jacobian(const Grid& g) const;
};

// Christoffel symbols of the second kind; result[l](j,k) = Gamma^l_{jk}.
std::array<Mat3, 3> christoffel(const MetricField& metric, const Vec3& x);

// Scalar curvature from the Ricci trace.
double scalar_curvature(const MetricField& metric, const Vec3& x);

// Conformal-Laplacian potential q_g = (n-2)/(4(n-1)) S_g.
double conformal_potential(const MetricField& metric, const Vec3& x, int n = 3);

// g -> c g with derivative evaluators composed by the product rule.
MetricField conformal_rescale(const MetricField& metric, const ConformalFactor& factor);

// (F^* g)_{ij}(x) = dF^a_i dF^b_j g_{ab}(F(x)). First derivatives are exact
// when the diffeo carries a Hessian; second derivatives are FD.
MetricField pullback_metric(const DiffeoField& diffeo, const MetricField& metric,
                            double fd_step);

// Tangential 2x2 block restricted to a face, as a field on T^2.
struct BoundaryMetric {
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> value;
  std::string tag;
};
BoundaryMetric induced_boundary_metric(const MetricField& metric, int face);

// Inward unit normal of a face with respect to `metric`.
Vec3 inward_unit_normal(const MetricField& metric, int face, const Vec3& x);

}  // namespace cclab
