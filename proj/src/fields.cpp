#include "cclab/fields.hpp"

#include <cmath>

namespace cclab {

void cubic_weights(double t, double w[4]) {
  // Lagrange basis on nodes {0,1,2,3} at t
  w[0] = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  w[1] = t * (t - 2) * (t - 3) / 2.0;
  w[2] = -t * (t - 1) * (t - 3) / 2.0;
  w[3] = t * (t - 1) * (t - 2) / 6.0;
}

void cubic_weights_derivative(double t, double w[4]) {
  w[0] = -(3 * t * t - 12 * t + 11) / 6.0;
  w[1] = (3 * t * t - 10 * t + 6) / 2.0;
  w[2] = -(3 * t * t - 8 * t + 3) / 2.0;
  w[3] = (3 * t * t - 6 * t + 2) / 6.0;
}

namespace {

struct Window {
  int base;   // first node of the 4-node window
  double t;   // local coordinate in [0,3]
};

// Tangential axis: periodic, window centered so t is in [1,2].
Window tangential_window(double x, int nt, double h) {
  const double s = x / h;
  int cell = static_cast<int>(std::floor(s));
  return {cell - 1, s - (cell - 1)};
}

// Normal axis: clamp the window inside [0, nn].
Window normal_window(double x, int nn, double h) {
  const double s = x / h;
  int cell = static_cast<int>(std::floor(s));
  if (cell < 0) cell = 0;
  if (cell > nn - 1) cell = nn - 1;
  int base = cell - 1;
  if (base < 0) base = 0;
  if (base > nn - 3) base = nn - 3;
  return {base, s - base};
}

}  // namespace

double InteriorField::interpolate(const Vec3& x) const {
  const Grid& g = grid;
  const Window wx = tangential_window(x[0], g.nt, g.ht);
  const Window wy = tangential_window(x[1], g.nt, g.ht);
  const Window wz = normal_window(x[2], g.nn, g.hn);
  double cx[4], cy[4], cz[4];
  cubic_weights(wx.t, cx);
  cubic_weights(wy.t, cy);
  cubic_weights(wz.t, cz);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        sum += cx[a] * cy[b] * cz[c] *
               values[g.node_index(wx.base + a, wy.base + b, wz.base + c)];
  return sum;
}

Vec3 InteriorField::interpolate_gradient(const Vec3& x) const {
  const Grid& g = grid;
  const Window wx = tangential_window(x[0], g.nt, g.ht);
  const Window wy = tangential_window(x[1], g.nt, g.ht);
  const Window wz = normal_window(x[2], g.nn, g.hn);
  double cx[4], cy[4], cz[4], dx[4], dy[4], dz[4];
  cubic_weights(wx.t, cx);
  cubic_weights(wy.t, cy);
  cubic_weights(wz.t, cz);
  cubic_weights_derivative(wx.t, dx);
  cubic_weights_derivative(wy.t, dy);
  cubic_weights_derivative(wz.t, dz);
  Vec3 grad = Vec3::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const double v = values[g.node_index(wx.base + a, wy.base + b, wz.base + c)];
        grad[0] += dx[a] * cy[b] * cz[c] * v;
        grad[1] += cx[a] * dy[b] * cz[c] * v;
        grad[2] += cx[a] * cy[b] * dz[c] * v;
      }
  grad[0] /= g.ht;
  grad[1] /= g.ht;
  grad[2] /= g.hn;
  return grad;
}

}  // namespace cclab
