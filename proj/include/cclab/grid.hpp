#pragma once

#include "cclab/common.hpp"

namespace cclab {

// Structured grid on the slab T^2 x [0,1]. Tangential axes are periodic with
// period 1 and nt nodes each; the normal axis has nn+1 node layers including
// both boundary faces. Node coordinates are exact multiples of the spacings,
// so they reproduce bit-exactly from indices.
struct Grid {
  int n = 3;    // ambient dimension; this build supports n == 3
  int nt = 0;   // nodes per tangential axis
  int nn = 0;   // cells along the normal axis (layers 0..nn)
  double ht = 0.0;
  double hn = 0.0;

  Grid() = default;
  Grid(int dim, int nt_, int nn_);

  int wrap(int i) const { return (i % nt + nt) % nt; }

  std::size_t num_nodes() const { return std::size_t(nt) * nt * (nn + 1); }
  std::size_t num_interior() const { return std::size_t(nt) * nt * (nn - 1); }
  std::size_t face_nodes() const { return std::size_t(nt) * nt; }

  std::size_t node_index(int ix, int iy, int iz) const {
    return (std::size_t(iz) * nt + wrap(iy)) * nt + wrap(ix);
  }
  std::size_t interior_index(int ix, int iy, int iz) const {
    return (std::size_t(iz - 1) * nt + wrap(iy)) * nt + wrap(ix);
  }
  // face 0 dofs come first, then face 1
  std::size_t boundary_index(int face, int ix, int iy) const {
    return std::size_t(face) * face_nodes() + std::size_t(wrap(iy)) * nt + wrap(ix);
  }

  Vec3 node(int ix, int iy, int iz) const {
    return Vec3(wrap(ix) * ht, wrap(iy) * ht, iz * hn);
  }
  Vec3 face_node(int face, int ix, int iy) const {
    return node(ix, iy, face == 0 ? 0 : nn);
  }

  bool is_boundary_layer(int iz) const { return iz == 0 || iz == nn; }

  Grid refined(int factor = 2) const { return Grid(n, nt * factor, nn * factor); }
};

inline Grid::Grid(int dim, int nt_, int nn_) : n(dim), nt(nt_), nn(nn_) {
  if (dim < 3) throw config_error("grid.n: dimension must be >= 3");
  if (dim != 3) throw config_error("grid.n: this build supports n = 3 only");
  if (nt < 8 || nt % 2 != 0) throw config_error("grid.N_t: must be even and >= 8");
  if (nn < 8) throw config_error("grid.N_n: must be >= 8");
  ht = 1.0 / nt;
  hn = 1.0 / nn;
}

}  // namespace cclab
