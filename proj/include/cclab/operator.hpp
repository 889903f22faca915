#pragma once

#include <memory>

#include <Eigen/Sparse>

#include "cclab/fields.hpp"
#include "cclab/metric.hpp"

namespace cclab {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Second-order divergence-form discretization of L_g = -Lap_g + q on interior
// nodes, row-scaled by the volume weight vol * sqrt|g| so the matrix is
// symmetric. `coupling` maps imposed boundary values into the interior rows.
struct SparseOperator {
  Grid grid;
  SpMat matrix;            // interior x interior, exactly symmetric
  SpMat coupling;          // interior x (2 nt^2) boundary dofs
  Vec weight;              // vol * sqrt|g| per interior node
  Vec potential;           // q at interior nodes
  std::string metric_tag;
  int stencil_order = 2;

  // Pointwise L u at interior nodes of a full field (boundary layers read
  // from the field itself).
  Vec apply_pointwise(const InteriorField& u) const;

  Vec boundary_vector(const BoundaryData& d) const {
    Vec b(2 * grid.face_nodes());
    b << d.face0, d.face1;
    return b;
  }
};

SparseOperator assemble_laplace_beltrami(const Grid& grid, const MetricField& metric);
SparseOperator assemble_conformal_laplacian(const Grid& grid, const MetricField& metric);

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

// Dirichlet solver: CG preconditioned by the tangential average of the
// operator (FFT-diagonal in x', tridiagonal in xn). The preconditioner is
// built once per (grid, metric) operator and shared across solves; solves
// are safe to run concurrently.
class DirichletSolver {
 public:
  explicit DirichletSolver(SparseOperator op, double tol = 1e-10);
  ~DirichletSolver();

  const SparseOperator& op() const { return op_; }
  const Grid& grid() const { return op_.grid; }

  // L u = rhs in the interior, u = data on the faces.
  InteriorField solve(const BoundaryData& data, SolveStats* stats = nullptr) const;
  InteriorField solve(const BoundaryData& data, const Vec& rhs_interior,
                      SolveStats* stats = nullptr) const;

  // Green column: unit discrete delta (w.r.t. Riemannian volume) at a node,
  // zero Dirichlet data. The weighted right-hand side is the coordinate
  // vector e_node, so <column, A row> pairs to point evaluation.
  InteriorField solve_delta(int ix, int iy, int iz, SolveStats* stats = nullptr) const;

 private:
  Vec solve_weighted(const Vec& b, SolveStats* stats) const;

  SparseOperator op_;
  double tol_;
  struct Preconditioner;
  std::unique_ptr<Preconditioner> pre_;
};

// Relative residual of the conformal scaling law of L_g applied to a sampled
// test field: compares L_{cg} u against c^{-(n+2)/4} L_g (c^{(n-2)/4} u).
struct CovarianceReport {
  double residual = 0.0;   // relative, over interior nodes
  double lhs_norm = 0.0;
};
CovarianceReport conformal_covariance_residual(const Grid& grid, const MetricField& g,
                                               const ConformalFactor& c,
                                               const std::function<double(const Vec3&)>& u);

}  // namespace cclab
