#include "doctest.h"

#include <random>

#include "cclab/operator.hpp"
#include "cclab/presets.hpp"
#include "oracles.hpp"

using namespace cclab;

namespace {

InteriorField sample_mode(const Grid& g, int k1, int k2, int m) {
  return InteriorField::from_function(g, [=](const Vec3& x) {
    return std::cos(2 * M_PI * (k1 * x[0] + k2 * x[1])) * std::sin(M_PI * m * x[2]);
  });
}

}  // namespace

TEST_CASE("flat Laplace-Beltrami: slab modes are discrete eigenvectors") {
  const Grid grid(3, 16, 16);
  const SparseOperator op = assemble_laplace_beltrami(grid, make_flat_metric());
  struct Case {
    int k1, k2, m;
  };
  for (const Case c : {Case{1, 0, 1}, Case{2, 1, 2}, Case{0, 3, 1}}) {
    const InteriorField u = sample_mode(grid, c.k1, c.k2, c.m);
    const Vec lu = op.apply_pointwise(u);
    // discrete symbol of the 7-point stencil
    const double lam_h =
        (2 - 2 * std::cos(2 * M_PI * c.k1 * grid.ht)) / sq(grid.ht) +
        (2 - 2 * std::cos(2 * M_PI * c.k2 * grid.ht)) / sq(grid.ht) +
        (2 - 2 * std::cos(M_PI * c.m * grid.hn)) / sq(grid.hn);
    const double lam = 4 * M_PI * M_PI * (c.k1 * c.k1 + c.k2 * c.k2) + M_PI * M_PI * c.m * c.m;
    double worst = 0.0;
    for (int iz = 1; iz < grid.nn; ++iz)
      for (int iy = 0; iy < grid.nt; ++iy)
        for (int ix = 0; ix < grid.nt; ++ix) {
          const std::size_t r = grid.interior_index(ix, iy, iz);
          worst = std::max(worst, std::abs(lu[r] - lam_h * u.at(ix, iy, iz)));
        }
    CHECK(worst <= 1e-10 * lam_h);  // exact discrete eigenvector
    // dispersion bound: each axis term differs by ~ lam_axis * theta^2 / 12
    const double tx = 2 * M_PI * c.k1 * grid.ht, ty = 2 * M_PI * c.k2 * grid.ht,
                 tz = M_PI * c.m * grid.hn;
    const double tol = 1.2 / 12.0 *
                       (sq(tx) * sq(2 * M_PI * c.k1) + sq(ty) * sq(2 * M_PI * c.k2) +
                        sq(tz) * sq(M_PI * c.m));
    CHECK(std::abs(lam_h - lam) <= tol);
  }
}

TEST_CASE("constant diagonal metric gives the anisotropic 7-point stencil") {
  const Grid grid(3, 8, 8);
  const double a = 2.0;
  ScalarExpr ca = [a](const Dual2&, const Dual2&, const Dual2&) { return Dual2(a); };
  ScalarExpr cn = [](const Dual2&, const Dual2&, const Dual2&) { return Dual2(1.0); };
  std::array<std::array<ScalarExpr, 3>, 3> comps;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      comps[i][j] = [i, j, ca, cn](const Dual2& p, const Dual2& q, const Dual2& r) {
        if (i != j) return Dual2(0.0);
        return i < 2 ? ca(p, q, r) : cn(p, q, r);
      };
  const SparseOperator op = assemble_laplace_beltrami(grid, metric_from_exprs(comps, true, "diag"));
  // sqrt|g| = a, g^{11} = 1/a -> tangential flux 1; normal flux a
  const double vol = grid.ht * grid.ht * grid.hn;
  const std::size_t row = grid.interior_index(3, 4, 4);
  double diag = 0, tx = 0, tz = 0;
  for (SpMat::InnerIterator it(op.matrix, row); it; ++it) {
    if (std::size_t(it.col()) == row) diag = it.value();
    if (std::size_t(it.col()) == grid.interior_index(4, 4, 4)) tx = it.value();
    if (std::size_t(it.col()) == grid.interior_index(3, 4, 5)) tz = it.value();
  }
  CHECK(tx == doctest::Approx(-vol / sq(grid.ht)).epsilon(1e-13));
  CHECK(tz == doctest::Approx(-vol * a / sq(grid.hn)).epsilon(1e-13));
  CHECK(diag == doctest::Approx(vol * (4.0 / sq(grid.ht) + 2.0 * a / sq(grid.hn))).epsilon(1e-13));
}

TEST_CASE("constant conformal rescale acts as c^{-1} on the discrete operator") {
  const Grid grid(3, 12, 12);
  const MetricField g = make_tangential_wave_metric(0.2, 0.05);
  const double c0 = 3.0;
  const MetricField cg = conformal_rescale(g, make_constant_factor(c0));
  const SparseOperator op_g = assemble_laplace_beltrami(grid, g);
  const SparseOperator op_cg = assemble_laplace_beltrami(grid, cg);
  const InteriorField u = InteriorField::from_function(grid, make_test_field(0));
  const Vec a = op_cg.apply_pointwise(u);
  const Vec b = op_g.apply_pointwise(u) / c0;
  CHECK((a - b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("conformal Laplacian potential matches the pointwise oracle") {
  const Grid grid(3, 8, 8);
  const MetricField g = make_wavy_warp_metric(0.25, 0.2, -0.1, 0.3);
  const SparseOperator op = assemble_conformal_laplacian(grid, g);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, grid.nt - 1), pz(1, grid.nn - 1);
  for (int trial = 0; trial < 12; ++trial) {
    const int ix = pick(rng), iy = pick(rng), iz = pz(rng);
    const double expected = scalar_curvature(g, grid.node(ix, iy, iz)) / 8.0;  // (n-2)/(4(n-1)), n=3
    CHECK(op.potential[grid.interior_index(ix, iy, iz)] ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  // flat: potential identically zero, operator = -Laplacian exactly
  const SparseOperator flat_op = assemble_conformal_laplacian(grid, make_flat_metric());
  CHECK(flat_op.potential.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weighted operator is exactly symmetric") {
  const Grid grid(3, 10, 10);
  for (const MetricField& g :
       {make_sheared_metric(0.3), make_wavy_warp_metric(0.2, 0.15, 0.0, 0.4)}) {
    const SparseOperator op = assemble_conformal_laplacian(grid, g);
    SpMat diff = SpMat(op.matrix.transpose()) - op.matrix;
    double scale = 0.0;
    for (int k = 0; k < op.matrix.outerSize(); ++k)
      for (SpMat::InnerIterator it(op.matrix, k); it; ++it)
        scale = std::max(scale, std::abs(it.value()));
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (SpMat::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    CHECK(worst <= 1e-12 * scale);
  }
}

TEST_CASE("weighted symmetry in the inner product for interior bumps") {
  const Grid grid(3, 10, 10);
  const SparseOperator op = assemble_conformal_laplacian(grid, make_sheared_metric(0.25));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Vec u(grid.num_interior()), v(grid.num_interior());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u[i] = gauss(rng);
    v[i] = gauss(rng);
  }
  const double a = u.dot(op.matrix * v), b = v.dot(op.matrix * u);
  CHECK(std::abs(a - b) <= 1e-10 * u.norm() * v.norm());
}

TEST_CASE("solve_dirichlet trivials: zero data, constants, linear profile") {
  const Grid grid(3, 12, 12);
  DirichletSolver solver(assemble_conformal_laplacian(grid, make_flat_metric()));

  InteriorField z = solver.solve(BoundaryData(grid));
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);

  BoundaryData ones(grid);
  ones.face0.setOnes();
  ones.face1.setOnes();
  InteriorField u1 = solver.solve(ones);
  CHECK((u1.values.array() - 1.0).abs().maxCoeff() <= 1e-9);

  BoundaryData ramp(grid);
  ramp.face1.setOnes();
  InteriorField ur = solver.solve(ramp);
  double worst = 0.0;
  for (int iz = 0; iz <= grid.nn; ++iz)
    for (int iy = 0; iy < grid.nt; ++iy)
      for (int ix = 0; ix < grid.nt; ++ix)
        worst = std::max(worst, std::abs(ur.at(ix, iy, iz) - iz * grid.hn));
  CHECK(worst <= 1e-8);
}

TEST_CASE("solver satisfies the algebraic residual contract on a curved preset") {
  const Grid grid(3, 16, 16);
  const SparseOperator op = assemble_conformal_laplacian(grid, make_wavy_warp_metric(0.2, 0.2, 0.0, 0.5));
  DirichletSolver solver(op);
  const BoundaryData data = BoundaryData::from_function(grid, [](int f, const Vec3& x) {
    return std::sin(2 * M_PI * x[0]) + (f == 1 ? 0.5 * std::cos(2 * M_PI * x[1]) : 0.0);
  });
  SolveStats st;
  InteriorField u = solver.solve(data, &st);
  CHECK(st.relative_residual <= 1e-10);
  // boundary rows hold the imposed data exactly
  for (int iy = 0; iy < grid.nt; ++iy)
    for (int ix = 0; ix < grid.nt; ++ix) {
      CHECK(u.at(ix, iy, 0) == data.face0[grid.boundary_index(0, ix, iy)]);
      CHECK(u.at(ix, iy, grid.nn) == data.face1[grid.boundary_index(0, ix, iy)]);
    }
}

TEST_CASE("solution is linear in the boundary data") {
  const Grid grid(3, 12, 12);
  DirichletSolver solver(assemble_conformal_laplacian(grid, make_tangential_wave_metric(0.2, 0.05)));
  const BoundaryData f = BoundaryData::from_function(grid, [](int, const Vec3& x) {
    return std::sin(2 * M_PI * x[0]);
  });
  const BoundaryData g = BoundaryData::from_function(grid, [](int fc, const Vec3& x) {
    return fc == 0 ? std::cos(2 * M_PI * x[1]) : x[0] * 0.0 + 0.7;
  });
  const double al = 1.7, be = -0.6;
  BoundaryData comb(grid);
  comb.face0 = al * f.face0 + be * g.face0;
  comb.face1 = al * f.face1 + be * g.face1;
  const Vec lhs = solver.solve(comb).values;
  const Vec rhs = al * solver.solve(f).values + be * solver.solve(g).values;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("discrete maximum principle for the flat q = 0 operator") {
  const Grid grid(3, 12, 12);
  DirichletSolver solver(assemble_laplace_beltrami(grid, make_flat_metric()));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(-1.0, 2.0);
  BoundaryData d(grid);
  for (Eigen::Index i = 0; i < d.face0.size(); ++i) {
    d.face0[i] = u01(rng);
    d.face1[i] = u01(rng);
  }
  const InteriorField u = solver.solve(d);
  const double lo = std::min(d.face0.minCoeff(), d.face1.minCoeff());
  const double hi = std::max(d.face0.maxCoeff(), d.face1.maxCoeff());
  CHECK(u.values.minCoeff() >= lo - 1e-9);
  CHECK(u.values.maxCoeff() <= hi + 1e-9);
}

TEST_CASE("grid refinement convergence against a separable exact solution") {
  // flat harmonic mode: u = cos(2 pi x1) sinh(2 pi xn)/sinh(2 pi)
  auto exact = [](const Vec3& x) {
    return std::cos(2 * M_PI * x[0]) * std::sinh(2 * M_PI * x[2]) / std::sinh(2 * M_PI);
  };
  std::vector<double> errs;
  for (int N : {12, 24}) {
    const Grid grid(3, N, N);
    DirichletSolver solver(assemble_laplace_beltrami(grid, make_flat_metric()));
    const BoundaryData d = BoundaryData::from_function(grid, [&](int, const Vec3& x) {
      return exact(x);
    });
    const InteriorField u = solver.solve(d);
    double worst = 0.0;
    for (int iz = 0; iz <= grid.nn; ++iz)
      for (int iy = 0; iy < grid.nt; ++iy)
        for (int ix = 0; ix < grid.nt; ++ix)
          worst = std::max(worst, std::abs(u.at(ix, iy, iz) - exact(grid.node(ix, iy, iz))));
    errs.push_back(worst);
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
}

TEST_CASE("curved-metric convergence against a conformally flat exact solution") {
  // g = c delta with generic c; u = c^{-1/4} v with v flat-harmonic solves L_g u = 0
  const ConformalFactor c = make_generic_factor(0.35);
  auto v = [](const Vec3& x) {
    return std::cos(2 * M_PI * x[1]) * std::cosh(2 * M_PI * (x[2] - 0.5)) / std::cosh(M_PI);
  };
  auto exact = [&](const Vec3& x) { return std::pow(c.c(x), -0.25) * v(x); };
  std::vector<double> errs;
  for (int N : {12, 24}) {
    const Grid grid(3, N, N);
    const MetricField g = conformal_rescale(make_flat_metric(), c);
    DirichletSolver solver(assemble_conformal_laplacian(grid, g));
    const BoundaryData d = BoundaryData::from_function(grid, [&](int, const Vec3& x) {
      return exact(x);
    });
    const InteriorField u = solver.solve(d);
    double worst = 0.0;
    for (int iz = 0; iz <= grid.nn; ++iz)
      for (int iy = 0; iy < grid.nt; ++iy)
        for (int ix = 0; ix < grid.nt; ++ix)
          worst = std::max(worst, std::abs(u.at(ix, iy, iz) - exact(grid.node(ix, iy, iz))));
    errs.push_back(worst);
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
}

TEST_CASE("conformal covariance residual: trivial, constant, generic") {
  const Grid grid(3, 16, 16);
  const MetricField g = make_flat_metric();
  auto u = make_test_field(1);

  CHECK(conformal_covariance_residual(grid, g, ConformalFactor::one(), u).residual <= 1e-13);
  CHECK(conformal_covariance_residual(grid, g, make_constant_factor(2.0), u).residual <= 1e-12);

  // generic factor: O(h^2) with slope >= 1.8 under refinement
  const ConformalFactor c = make_generic_factor(0.1);
  const double r16 = conformal_covariance_residual(Grid(3, 16, 16), g, c, u).residual;
  const double r32 = conformal_covariance_residual(Grid(3, 32, 32), g, c, u).residual;
  CHECK(std::log2(r16 / r32) >= 1.8);
}

TEST_CASE("indefinite conformal Laplacian triggers the eigenvalue obstruction error") {
  // Product metric e^{2b cos(2 pi x1)} dx'^2 + T^2 dxn^2: Gauss-Bonnet forces
  // the tangential -Lap + K/4 to have a negative bottom eigenvalue, and a
  // metrically thick normal direction cannot lift it back above zero.
  const Grid grid(3, 12, 12);
  const double b = 1.5, T = 5.0;
  ScalarExpr tang = [b](const Dual2& x1, const Dual2&, const Dual2&) {
    return exp(Dual2(2.0 * b) * cos(Dual2(2 * M_PI) * x1));
  };
  std::array<std::array<ScalarExpr, 3>, 3> comps;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      comps[i][j] = [tang, T, i, j](const Dual2& p, const Dual2& q, const Dual2& r) {
        if (i != j) return Dual2(0.0);
        return i < 2 ? tang(p, q, r) : Dual2(T * T);
      };
  const MetricField g = metric_from_exprs(comps, true, "thick_hyperbolic");
  DirichletSolver solver(assemble_conformal_laplacian(grid, g));
  BoundaryData d(grid);
  d.face0.setOnes();
  CHECK_THROWS_AS(solver.solve(d), solver_error);
}
