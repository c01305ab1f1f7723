#include "mixkin/sym3.hpp"

#include <algorithm>
#include <cmath>

#include "mixkin/errors.hpp"

namespace mixkin {

namespace {

double frobenius(const SymTensor3& t) {
  double d = t.xx * t.xx + t.yy * t.yy + t.zz * t.zz;
  double o = t.xy * t.xy + t.xz * t.xz + t.yz * t.yz;
  return std::sqrt(d + 2.0 * o);
}

// Cyclic Jacobi sweeps on the full 3x3 matrix; only used when the
// trigonometric formula is ill-conditioned, so convergence is quick.
std::array<double, 3> jacobi_eigenvalues(const SymTensor3& t) {
  double a[3][3] = {{t.xx, t.xy, t.xz}, {t.xy, t.yy, t.yz}, {t.xz, t.yz, t.zz}};
  const double scale = std::max(max_abs_entry(t), 1e-300);
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off < 1e-60 * scale * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double tt = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

} // namespace

double det(const SymTensor3& t) {
  return t.xx * (t.yy * t.zz - t.yz * t.yz) - t.xy * (t.xy * t.zz - t.yz * t.xz) +
         t.xz * (t.xy * t.yz - t.yy * t.xz);
}

SymTensor3 inverse(const SymTensor3& t) {
  // Cofactors of the symmetric matrix; the adjugate is symmetric too.
  const double c00 = t.yy * t.zz - t.yz * t.yz;
  const double c01 = t.xz * t.yz - t.xy * t.zz;
  const double c02 = t.xy * t.yz - t.yy * t.xz;
  const double c11 = t.xx * t.zz - t.xz * t.xz;
  const double c12 = t.xy * t.xz - t.xx * t.yz;
  const double c22 = t.xx * t.yy - t.xy * t.xy;
  const double d = t.xx * c00 + t.xy * c01 + t.xz * c02;
  if (std::abs(d) < 1e-300) throw SingularTensor("tensor determinant vanishes");
  const double inv_d = 1.0 / d;
  SymTensor3 inv{c00 * inv_d, c11 * inv_d, c22 * inv_d,
                 c01 * inv_d, c02 * inv_d, c12 * inv_d};
  if (frobenius(t) * frobenius(inv) > 1e14) {
    throw SingularTensor("tensor condition estimate exceeds 1e14");
  }
  return inv;
}

std::array<double, 3> eigenvalues(const SymTensor3& t) {
  const double p1 = t.xy * t.xy + t.xz * t.xz + t.yz * t.yz;
  if (p1 == 0.0) {
    std::array<double, 3> ev = {t.xx, t.yy, t.zz};
    std::sort(ev.begin(), ev.end());
    return ev;
  }
  const double q = t.trace() / 3.0;
  const double p2 = (t.xx - q) * (t.xx - q) + (t.yy - q) * (t.yy - q) +
                    (t.zz - q) * (t.zz - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return {q, q, q};
  // B = (T - q I) / p has eigenvalues 2 cos(phi + 2k pi / 3).
  SymTensor3 b{(t.xx - q) / p, (t.yy - q) / p, (t.zz - q) / p,
               t.xy / p, t.xz / p, t.yz / p};
  double r = det(b) / 2.0;
  if (std::abs(r) >= 1.0 - 1e-14) {
    // Nearly repeated roots; acos is ill-conditioned there.
    return jacobi_eigenvalues(t);
  }
  const double phi = std::acos(r) / 3.0;
  const double two_pi_3 = 2.0943951023931953; // 2 pi / 3
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + two_pi_3);
  const double mid = 3.0 * q - hi - lo;
  std::array<double, 3> ev = {lo, mid, hi};
  std::sort(ev.begin(), ev.end());
  return ev;
}

double quadratic_form(const SymTensor3& t, Vec3 w) {
  return t.xx * w.x * w.x + t.yy * w.y * w.y + t.zz * w.z * w.z +
         2.0 * (t.xy * w.x * w.y + t.xz * w.x * w.z + t.yz * w.y * w.z);
}

SymTensor3 convex_combine(double a, const SymTensor3& t1, const SymTensor3& t2) {
  const double b = 1.0 - a;
  return {a * t1.xx + b * t2.xx, a * t1.yy + b * t2.yy, a * t1.zz + b * t2.zz,
          a * t1.xy + b * t2.xy, a * t1.xz + b * t2.xz, a * t1.yz + b * t2.yz};
}

} // namespace mixkin
