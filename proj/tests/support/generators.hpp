#pragma once

// Random inputs shared by the property tests: SPD tensors with a known
// spectrum and mixture configs drawn inside the admissible windows.

#include <cmath>
#include <random>

#include "mixkin/closures.hpp"
#include "mixkin/sym3.hpp"

namespace testkit {

// R D R^T for a rotation R built from three axis angles.
inline mixkin::SymTensor3 rotated_diagonal(double d0, double d1, double d2, double a,
                                           double b, double c) {
  double r[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double angles[3] = {a, b, c};
  for (int k = 0; k < 3; ++k) {
    const int i = k, j = (k + 1) % 3;
    const double cs = std::cos(angles[k]), sn = std::sin(angles[k]);
    for (int col = 0; col < 3; ++col) {
      const double ri = r[i][col], rj = r[j][col];
      r[i][col] = cs * ri - sn * rj;
      r[j][col] = sn * ri + cs * rj;
    }
  }
  const double d[3] = {d0, d1, d2};
  double m[3][3] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) m[i][j] += r[i][k] * d[k] * r[j][k];
    }
  }
  return {m[0][0], m[1][1], m[2][2], m[0][1], m[0][2], m[1][2]};
}

inline mixkin::SymTensor3 random_spd(std::mt19937_64& rng, double lo = 0.2,
                                     double hi = 3.0) {
  std::uniform_real_distribution<double> eig(lo, hi);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
  return rotated_diagonal(eig(rng), eig(rng), eig(rng), ang(rng), ang(rng), ang(rng));
}

inline mixkin::Vec3 random_vec(std::mt19937_64& rng, double lim = 1.0) {
  std::uniform_real_distribution<double> d(-lim, lim);
  return {d(rng), d(rng), d(rng)};
}

// A config drawn uniformly inside every admissible window.
inline mixkin::MixtureConfig random_config(std::mt19937_64& rng,
                                           mixkin::Variant v = mixkin::Variant::bgk) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  mixkin::MixtureConfig c;
  c.variant = v;
  c.m1 = 0.5 + 2.5 * unit(rng);
  c.m2 = 0.5 + 2.5 * unit(rng);
  c.nu12 = 0.3 + 2.7 * unit(rng);
  c.eps = 0.2 + 0.8 * unit(rng);
  c.beta1 = 0.3 + 2.7 * unit(rng);
  c.beta2 = 0.3 + 2.7 * unit(rng);
  const double dlo = mixkin::delta_lower_bound(c.m1, c.m2, c.eps);
  c.delta = dlo + (1.0 - dlo) * unit(rng);
  c.alpha = unit(rng);
  c.gamma = mixkin::gamma_upper_bound(c.m1, c.m2, c.eps, c.delta) * unit(rng);
  if (uses_gaussian_self(v)) {
    c.mu1 = -0.5 + 1.5 * unit(rng);
    c.mu2 = -0.5 + 1.5 * unit(rng);
  }
  return c;
}

} // namespace testkit
