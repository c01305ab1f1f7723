#pragma once

#include <cstddef>
#include <vector>

namespace mixkin {

// A distribution sampled on the velocity grid, flattened with x fastest:
// index = (iz * n + iy) * n + ix.
using GridField = std::vector<double>;

// Uniform cubic velocity grid on [-extent, extent]^3 with an odd number of
// points per axis, so v = 0 is always a node and the axis is exactly
// symmetric: node(i) = (i - mid) * h.
struct VelocityGrid {
  int n = 0;          // points per axis, odd
  double extent = 0;  // half-width of the cube
  double h = 0;       // node spacing, 2*extent/(n-1)
  std::vector<double> axis;    // node coordinates
  std::vector<double> axis_w;  // per-axis quadrature weights (trapezoid)

  int mid() const { return (n - 1) / 2; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n + iy) * n + ix;
  }
};

// Throws BadResolution unless extent > 0 and points is odd and >= 9.
VelocityGrid build_grid(double extent, int points);

} // namespace mixkin
