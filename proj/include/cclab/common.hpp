#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace cclab {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Hard failure in the differential-geometric layer (non-SPD metric, focal
// points, degenerate Jacobians).
struct geometry_error : std::runtime_error {
  explicit geometry_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear solver failure; carries the "eigenvalue obstruction" message when a
// Dirichlet system looks singular.
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller violated a documented precondition.
struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Scenario/config validation failure; message names the offending field path.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline double sq(double x) { return x * x; }

// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
// Returns weights w such that f^(m)(x0) ~= sum_i w[i] f(xs[i]).
std::vector<double> fd_weights(double x0, std::span<const double> xs, int order);

// Deterministic work partition over [0, count). Each worker writes disjoint
// slots; reductions are done by the caller in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int threads = 0);

// Process-wide default worker count (CLI --threads / CCLAB_THREADS).
int default_threads();
void set_default_threads(int t);

// Linear least-squares fit y = a + b*x; returns {a, b, r_squared}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace cclab
