#include "cclab/operator.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

namespace cclab {

namespace {

// a^{jk} = sqrt|g| g^{jk} at an arbitrary point
Mat3 flux_coefficient(const MetricField& metric, const Vec3& x) {
  const Mat3 g = metric.value(x);
  const double det = g.determinant();
  if (det <= 0.0) throw geometry_error("assembly: metric determinant not positive");
  return std::sqrt(det) * g.inverse();
}

SparseOperator assemble(const Grid& grid, const MetricField& metric, bool with_potential) {
  if (!metric.periodic)
    throw precondition_error("operator assembly requires a tangentially periodic metric");
  metric.check_spd(grid);

  const int nt = grid.nt, nn = grid.nn;
  const double h[3] = {grid.ht, grid.ht, grid.hn};
  const double vol = grid.ht * grid.ht * grid.hn;

  SparseOperator op;
  op.grid = grid;
  op.metric_tag = metric.tag;
  op.weight = Vec::Zero(grid.num_interior());
  op.potential = Vec::Zero(grid.num_interior());

  using T = Eigen::Triplet<double>;
  std::vector<T> at, ct;
  at.reserve(grid.num_interior() * 19);

  // per-row scatter: interior columns into at, boundary columns into ct
  auto scatter = [&](std::size_t row, int ix, int iy, int iz, double v) {
    if (iz == 0 || iz == nn) {
      ct.emplace_back(row, grid.boundary_index(iz == 0 ? 0 : 1, ix, iy), v);
    } else {
      at.emplace_back(row, grid.interior_index(ix, iy, iz), v);
    }
  };

  std::vector<double> qv(grid.num_interior(), 0.0);
  if (with_potential) {
    parallel_for(grid.num_interior(), [&](std::size_t r) {
      const int ix = static_cast<int>(r % nt);
      const int iy = static_cast<int>((r / nt) % nt);
      const int iz = static_cast<int>(r / (std::size_t(nt) * nt)) + 1;
      qv[r] = conformal_potential(metric, grid.node(ix, iy, iz), grid.n);
    });
  }

  for (int iz = 1; iz < nn; ++iz)
    for (int iy = 0; iy < nt; ++iy)
      for (int ix = 0; ix < nt; ++ix) {
        const std::size_t row = grid.interior_index(ix, iy, iz);
        const Vec3 x = grid.node(ix, iy, iz);
        const double w = metric.sqrt_det(x);
        op.weight[row] = vol * w;
        op.potential[row] = qv[row];

        double diag = vol * w * qv[row];
        const int idx[3] = {ix, iy, iz};

        // same-axis flux terms with half-point coefficients
        for (int d = 0; d < 3; ++d) {
          Vec3 xp = x, xm = x;
          xp[d] += 0.5 * h[d];
          xm[d] -= 0.5 * h[d];
          const double ap = flux_coefficient(metric, xp)(d, d);
          const double am = flux_coefficient(metric, xm)(d, d);
          const double s = vol / (h[d] * h[d]);
          int nb[3] = {ix, iy, iz};
          nb[d] = idx[d] + 1;
          scatter(row, nb[0], nb[1], nb[2], -s * ap);
          nb[d] = idx[d] - 1;
          scatter(row, nb[0], nb[1], nb[2], -s * am);
          diag += s * (ap + am);
        }

        // mixed terms: -[D_a(c D_b u) + D_b(c D_a u)] with central differences
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b) {
            // skip if the coefficient vanishes identically near this node
            const double s = vol / (4.0 * h[a] * h[b]);
            double cnb[2][2];  // c at node +- e_a, +- e_b
            bool any = false;
            for (int sa = 0; sa < 2; ++sa) {
              Vec3 xa = x;
              xa[a] += (sa == 0 ? 1.0 : -1.0) * h[a];
              cnb[0][sa] = flux_coefficient(metric, xa)(a, b);
              Vec3 xb = x;
              xb[b] += (sa == 0 ? 1.0 : -1.0) * h[b];
              cnb[1][sa] = flux_coefficient(metric, xb)(a, b);
              any = any || cnb[0][sa] != 0.0 || cnb[1][sa] != 0.0;
            }
            if (!any) continue;
            for (int sa = -1; sa <= 1; sa += 2)
              for (int sb = -1; sb <= 1; sb += 2) {
                const double ca = cnb[0][sa > 0 ? 0 : 1];  // c(x + sa e_a)
                const double cb = cnb[1][sb > 0 ? 0 : 1];  // c(x + sb e_b)
                int nb2[3] = {ix, iy, iz};
                nb2[a] += sa;
                nb2[b] += sb;
                scatter(row, nb2[0], nb2[1], nb2[2], -s * sa * sb * (ca + cb));
              }
          }

        at.emplace_back(row, row, diag);
      }

  op.matrix.resize(grid.num_interior(), grid.num_interior());
  op.matrix.setFromTriplets(at.begin(), at.end());
  op.coupling.resize(grid.num_interior(), 2 * grid.face_nodes());
  op.coupling.setFromTriplets(ct.begin(), ct.end());
  return op;
}

}  // namespace

SparseOperator assemble_laplace_beltrami(const Grid& grid, const MetricField& metric) {
  return assemble(grid, metric, false);
}

SparseOperator assemble_conformal_laplacian(const Grid& grid, const MetricField& metric) {
  return assemble(grid, metric, true);
}

Vec SparseOperator::apply_pointwise(const InteriorField& u) const {
  Vec ui(grid.num_interior());
  for (int iz = 1; iz < grid.nn; ++iz)
    for (int iy = 0; iy < grid.nt; ++iy)
      for (int ix = 0; ix < grid.nt; ++ix)
        ui[grid.interior_index(ix, iy, iz)] = u.at(ix, iy, iz);
  const Vec b = boundary_vector(u.boundary());
  Vec r = matrix * ui + coupling * b;
  return r.cwiseQuotient(weight);
}

// ---------------------------------------------------------------------------
// Preconditioner: tangential average of the assembled stencil. For each layer
// the mean diagonal and mean +-x, +-y, +-z couplings define a constant-
// coefficient operator that the tangential DFT diagonalizes; each Fourier
// mode leaves a symmetric tridiagonal system along xn.
// ---------------------------------------------------------------------------

struct DirichletSolver::Preconditioner {
  int nt = 0, nz = 0;
  std::vector<double> diag, cx, cy;   // per layer (size nz)
  std::vector<double> cup;            // coupling layer k -> k+1 (size nz-1)
  std::vector<double> symx;           // 2(1 - cos(2 pi q / nt)) factors
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<double> pr_diag;        // Thomas pivots per mode, nmode x nz
  int nmode = 0;
  bool usable = true;

  ~Preconditioner() {
    static std::mutex fftw_mutex;
    std::lock_guard<std::mutex> lock(fftw_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }

  void build(const SparseOperator& op) {
    const Grid& g = op.grid;
    nt = g.nt;
    nz = g.nn - 1;
    nmode = nt * (nt / 2 + 1);
    diag.assign(nz, 0.0);
    cx.assign(nz, 0.0);
    cy.assign(nz, 0.0);
    cup.assign(std::max(nz - 1, 0), 0.0);

    // tangential means of the core couplings, read off the matrix
    const SpMat& A = op.matrix;
    const double inv_face = 1.0 / double(std::size_t(nt) * nt);
    for (int iz = 1; iz < g.nn; ++iz) {
      const int k = iz - 1;
      for (int iy = 0; iy < nt; ++iy)
        for (int ix = 0; ix < nt; ++ix) {
          const std::size_t row = g.interior_index(ix, iy, iz);
          const std::size_t col_xp = g.interior_index(ix + 1, iy, iz);
          const std::size_t col_yp = g.interior_index(ix, iy + 1, iz);
          const std::size_t col_zp = iz + 1 < g.nn ? g.interior_index(ix, iy, iz + 1) : row;
          for (SpMat::InnerIterator it(A, row); it; ++it) {
            const std::size_t c = it.col();
            if (c == row) diag[k] += it.value() * inv_face;
            else if (c == col_xp) cx[k] += it.value() * inv_face;
            else if (c == col_yp) cy[k] += it.value() * inv_face;
            else if (iz + 1 < g.nn && c == col_zp && k < nz - 1)
              cup[k] += it.value() * inv_face;
          }
        }
    }

    symx.assign(nt, 0.0);
    for (int q = 0; q < nt; ++q) symx[q] = 2.0 * (1.0 - std::cos(2.0 * M_PI * q / nt));

    // Thomas pivots per mode; abort to identity preconditioning if a pivot
    // degenerates (operator too indefinite for this preconditioner).
    pr_diag.assign(std::size_t(nmode) * nz, 0.0);
    for (int qy = 0; qy < nt && usable; ++qy)
      for (int qx = 0; qx < nt / 2 + 1 && usable; ++qx) {
        const int m = qy * (nt / 2 + 1) + qx;
        double* piv = &pr_diag[std::size_t(m) * nz];
        double prev = 0.0;
        for (int k = 0; k < nz; ++k) {
          // mode diagonal: the +-x,+-y couplings contribute 2 c cos(theta)
          double dg = diag[k] + cx[k] * (2.0 - symx[qx]) + cy[k] * (2.0 - symx[qy]);
          if (k > 0) dg -= cup[k - 1] * cup[k - 1] / prev;
          if (dg <= 0.0) {
            usable = false;
            break;
          }
          piv[k] = dg;
          prev = dg;
        }
      }

    static std::mutex fftw_mutex;
    std::lock_guard<std::mutex> lock(fftw_mutex);
    std::vector<double> rbuf(std::size_t(nt) * nt);
    std::vector<std::complex<double>> cbuf(std::size_t(nt) * (nt / 2 + 1));
    fwd = fftw_plan_dft_r2c_2d(nt, nt, rbuf.data(),
                               reinterpret_cast<fftw_complex*>(cbuf.data()), FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(nt, nt, reinterpret_cast<fftw_complex*>(cbuf.data()),
                               rbuf.data(), FFTW_ESTIMATE);
  }

  // out = M^{-1} r; scratch buffers are caller-provided so concurrent solves
  // do not share state.
  void apply(const Vec& r, Vec& out, std::vector<double>& rbuf,
             std::vector<std::complex<double>>& cbuf,
             std::vector<std::complex<double>>& hat) const {
    if (!usable) {
      out = r;
      return;
    }
    const std::size_t face = std::size_t(nt) * nt;
    const int nc = nt / 2 + 1;
    for (int k = 0; k < nz; ++k) {
      std::copy(r.data() + k * face, r.data() + (k + 1) * face, rbuf.data());
      fftw_execute_dft_r2c(fwd, rbuf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()));
      for (int m = 0; m < nmode; ++m) hat[std::size_t(m) * nz + k] = cbuf[m];
    }
    for (int qy = 0; qy < nt; ++qy)
      for (int qx = 0; qx < nc; ++qx) {
        const int m = qy * nc + qx;
        std::complex<double>* col = &hat[std::size_t(m) * nz];
        const double* piv = &pr_diag[std::size_t(m) * nz];
        // forward sweep (L D L^T with unit lower bidiagonal l_k = cup_k / piv_k)
        for (int k = 1; k < nz; ++k) col[k] -= (cup[k - 1] / piv[k - 1]) * col[k - 1];
        for (int k = 0; k < nz; ++k) col[k] /= piv[k];
        for (int k = nz - 2; k >= 0; --k) col[k] -= (cup[k] / piv[k]) * col[k + 1];
      }
    const double scale = 1.0 / double(face);
    for (int k = 0; k < nz; ++k) {
      for (int m = 0; m < nmode; ++m) cbuf[m] = hat[std::size_t(m) * nz + k];
      fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data());
      for (std::size_t p = 0; p < face; ++p) out[k * face + p] = rbuf[p] * scale;
    }
  }
};

DirichletSolver::DirichletSolver(SparseOperator op, double tol)
    : op_(std::move(op)), tol_(tol), pre_(std::make_unique<Preconditioner>()) {
  pre_->build(op_);
}

DirichletSolver::~DirichletSolver() = default;

Vec DirichletSolver::solve_weighted(const Vec& b, SolveStats* stats) const {
  const std::size_t n = op_.matrix.rows();
  Vec x = Vec::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  std::vector<double> rbuf(std::size_t(pre_->nt) * pre_->nt);
  std::vector<std::complex<double>> cbuf(std::size_t(pre_->nt) * (pre_->nt / 2 + 1));
  std::vector<std::complex<double>> hat(std::size_t(pre_->nmode) * pre_->nz);

  Vec r = b, z(n), p(n), Ap(n);
  pre_->apply(r, z, rbuf, cbuf, hat);
  p = z;
  double rz = r.dot(z);
  const int max_iter = 2000;
  for (int it = 0; it < max_iter; ++it) {
    Ap.noalias() = op_.matrix * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0))
      throw solver_error(
          "eigenvalue obstruction: operator not positive along CG direction "
          "(0 may be near a Dirichlet eigenvalue)");
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    const double rel = r.norm() / bnorm;
    if (rel < tol_) {
      if (stats) *stats = {it + 1, rel};
      return x;
    }
    pre_->apply(r, z, rbuf, cbuf, hat);
    const double rz2 = r.dot(z);
    p = z + (rz2 / rz) * p;
    rz = rz2;
  }
  throw solver_error("eigenvalue obstruction: CG stagnated at relative residual " +
                     std::to_string((op_.matrix * x - b).norm() / bnorm));
}

InteriorField DirichletSolver::solve(const BoundaryData& data, SolveStats* stats) const {
  return solve(data, Vec::Zero(op_.matrix.rows()), stats);
}

InteriorField DirichletSolver::solve(const BoundaryData& data, const Vec& rhs_interior,
                                     SolveStats* stats) const {
  Vec b = rhs_interior - op_.coupling * op_.boundary_vector(data);
  Vec u = solve_weighted(b, stats);
  InteriorField out(op_.grid);
  for (int iz = 1; iz < op_.grid.nn; ++iz)
    for (int iy = 0; iy < op_.grid.nt; ++iy)
      for (int ix = 0; ix < op_.grid.nt; ++ix)
        out.at(ix, iy, iz) = u[op_.grid.interior_index(ix, iy, iz)];
  out.impose_boundary(data);
  return out;
}

InteriorField DirichletSolver::solve_delta(int ix, int iy, int iz, SolveStats* stats) const {
  if (iz <= 0 || iz >= op_.grid.nn)
    throw precondition_error("solve_delta: source must be an interior node");
  Vec b = Vec::Zero(op_.matrix.rows());
  b[op_.grid.interior_index(ix, iy, iz)] = 1.0;
  Vec u = solve_weighted(b, stats);
  InteriorField out(op_.grid);
  for (int jz = 1; jz < op_.grid.nn; ++jz)
    for (int jy = 0; jy < op_.grid.nt; ++jy)
      for (int jx = 0; jx < op_.grid.nt; ++jx)
        out.at(jx, jy, jz) = u[op_.grid.interior_index(jx, jy, jz)];
  return out;
}

CovarianceReport conformal_covariance_residual(const Grid& grid, const MetricField& g,
                                               const ConformalFactor& c,
                                               const std::function<double(const Vec3&)>& u) {
  const int n = grid.n;
  const double ep = -(n + 2) / 4.0;
  const double em = (n - 2) / 4.0;
  const MetricField cg = conformal_rescale(g, c);

  SparseOperator op_g = assemble_conformal_laplacian(grid, g);
  SparseOperator op_cg = assemble_conformal_laplacian(grid, cg);

  InteriorField uf = InteriorField::from_function(grid, u);
  InteriorField cu = InteriorField::from_function(grid, [&](const Vec3& x) {
    return std::pow(c.c(x), em) * u(x);
  });

  const Vec lhs = op_cg.apply_pointwise(uf);
  Vec rhs = op_g.apply_pointwise(cu);
  for (int iz = 1; iz < grid.nn; ++iz)
    for (int iy = 0; iy < grid.nt; ++iy)
      for (int ix = 0; ix < grid.nt; ++ix) {
        const std::size_t r = grid.interior_index(ix, iy, iz);
        rhs[r] *= std::pow(c.c(grid.node(ix, iy, iz)), ep);
      }
  CovarianceReport rep;
  rep.lhs_norm = lhs.norm() / std::sqrt(double(lhs.size()));
  const double den = std::max(lhs.norm(), rhs.norm());
  rep.residual = den > 0 ? (lhs - rhs).norm() / den : 0.0;
  return rep;
}

}  // namespace cclab
