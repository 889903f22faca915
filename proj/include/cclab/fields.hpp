#pragma once

#include "cclab/grid.hpp"

namespace cclab {

// Scalar data on the two boundary faces.
struct BoundaryData {
  Vec face0;
  Vec face1;

  BoundaryData() = default;
  explicit BoundaryData(const Grid& g)
      : face0(Vec::Zero(g.face_nodes())), face1(Vec::Zero(g.face_nodes())) {}

  Vec& face(int f) { return f == 0 ? face0 : face1; }
  const Vec& face(int f) const { return f == 0 ? face0 : face1; }

  static BoundaryData from_function(const Grid& g,
                                    const std::function<double(int, const Vec3&)>& fn) {
    BoundaryData d(g);
    for (int f = 0; f < 2; ++f)
      for (int iy = 0; iy < g.nt; ++iy)
        for (int ix = 0; ix < g.nt; ++ix)
          d.face(f)[g.boundary_index(0, ix, iy)] = fn(f, g.face_node(f, ix, iy));
    return d;
  }
};

// Scalar values on every grid node; boundary layers hold the imposed data.
struct InteriorField {
  Grid grid;
  Vec values;

  InteriorField() = default;
  explicit InteriorField(const Grid& g) : grid(g), values(Vec::Zero(g.num_nodes())) {}

  double& at(int ix, int iy, int iz) { return values[grid.node_index(ix, iy, iz)]; }
  double at(int ix, int iy, int iz) const { return values[grid.node_index(ix, iy, iz)]; }

  static InteriorField from_function(const Grid& g,
                                     const std::function<double(const Vec3&)>& fn) {
    InteriorField u(g);
    for (int iz = 0; iz <= g.nn; ++iz)
      for (int iy = 0; iy < g.nt; ++iy)
        for (int ix = 0; ix < g.nt; ++ix) u.at(ix, iy, iz) = fn(g.node(ix, iy, iz));
    return u;
  }

  void impose_boundary(const BoundaryData& d) {
    for (int iy = 0; iy < grid.nt; ++iy)
      for (int ix = 0; ix < grid.nt; ++ix) {
        at(ix, iy, 0) = d.face0[grid.boundary_index(0, ix, iy)];
        at(ix, iy, grid.nn) = d.face1[grid.boundary_index(0, ix, iy)];
      }
  }

  BoundaryData boundary() const {
    BoundaryData d(grid);
    for (int iy = 0; iy < grid.nt; ++iy)
      for (int ix = 0; ix < grid.nt; ++ix) {
        d.face0[grid.boundary_index(0, ix, iy)] = at(ix, iy, 0);
        d.face1[grid.boundary_index(0, ix, iy)] = at(ix, iy, grid.nn);
      }
    return d;
  }

  // Tensor-product local cubic interpolation: periodic tangentially, window
  // clamped inside [0,1] normally. Fourth-order accurate for smooth fields.
  double interpolate(const Vec3& x) const;

  // Gradient of the interpolant (used by Newton inversions).
  Vec3 interpolate_gradient(const Vec3& x) const;
};

// Cubic Lagrange weights for a 4-node window {base, base+1, base+2, base+3}
// evaluated at local coordinate t measured from `base` in units of h.
void cubic_weights(double t, double w[4]);
void cubic_weights_derivative(double t, double w[4]);

}  // namespace cclab
