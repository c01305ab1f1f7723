#include "mixkin/vgrid.hpp"

#include <string>

#include "mixkin/errors.hpp"

namespace mixkin {

VelocityGrid build_grid(double extent, int points) {
  if (!(extent > 0.0)) {
    throw BadResolution("grid extent must be positive, got " + std::to_string(extent));
  }
  if (points < 9 || points % 2 == 0) {
    throw BadResolution("grid needs an odd point count >= 9, got " + std::to_string(points));
  }
  VelocityGrid g;
  g.n = points;
  g.extent = extent;
  g.h = 2.0 * extent / (points - 1);
  g.axis.resize(points);
  g.axis_w.resize(points);
  const int mid = g.mid();
  for (int i = 0; i < points; ++i) {
    // (i - mid) * h makes the axis bitwise antisymmetric about zero.
    g.axis[i] = (i - mid) * g.h;
    g.axis_w[i] = g.h;
  }
  // Trapezoid closure: boundary planes carry half weight, so a constant
  // integrates to exactly the cube volume.
  g.axis_w[0] *= 0.5;
  g.axis_w[points - 1] *= 0.5;
  return g;
}

} // namespace mixkin
