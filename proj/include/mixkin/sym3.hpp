#pragma once

#include <array>
#include <cmath>

namespace mixkin {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double c, Vec3 v) { return {c * v.x, c * v.y, c * v.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(Vec3 v) { return dot(v, v); }
inline double max_abs(Vec3 v) {
  return std::max(std::abs(v.x), std::max(std::abs(v.y), std::abs(v.z)));
}

// Symmetric 3x3 tensor stored as its six independent entries.
struct SymTensor3 {
  double xx = 0.0, yy = 0.0, zz = 0.0;
  double xy = 0.0, xz = 0.0, yz = 0.0;

  static SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static SymTensor3 isotropic(double t) { return {t, t, t, 0.0, 0.0, 0.0}; }

  double trace() const { return xx + yy + zz; }
  bool is_diagonal() const { return xy == 0.0 && xz == 0.0 && yz == 0.0; }

  bool operator==(const SymTensor3&) const = default;
};

inline SymTensor3 operator+(const SymTensor3& a, const SymTensor3& b) {
  return {a.xx + b.xx, a.yy + b.yy, a.zz + b.zz, a.xy + b.xy, a.xz + b.xz, a.yz + b.yz};
}
inline SymTensor3 operator-(const SymTensor3& a, const SymTensor3& b) {
  return {a.xx - b.xx, a.yy - b.yy, a.zz - b.zz, a.xy - b.xy, a.xz - b.xz, a.yz - b.yz};
}
inline SymTensor3 operator*(double c, const SymTensor3& t) {
  return {c * t.xx, c * t.yy, c * t.zz, c * t.xy, c * t.xz, c * t.yz};
}

// v (x) v, the rank-one tensor.
inline SymTensor3 outer(Vec3 v) {
  return {v.x * v.x, v.y * v.y, v.z * v.z, v.x * v.y, v.x * v.z, v.y * v.z};
}

inline double max_abs_entry(const SymTensor3& t) {
  double m = std::abs(t.xx);
  m = std::max(m, std::abs(t.yy));
  m = std::max(m, std::abs(t.zz));
  m = std::max(m, std::abs(t.xy));
  m = std::max(m, std::abs(t.xz));
  m = std::max(m, std::abs(t.yz));
  return m;
}

double det(const SymTensor3& t);

// Inverse via the adjugate. Throws SingularTensor when |det| is vanishing or
// the Frobenius-norm condition estimate exceeds 1e14.
SymTensor3 inverse(const SymTensor3& t);

// Eigenvalues in ascending order. Closed-form trigonometric solution with a
// Jacobi-sweep fallback when the discriminant is degenerate; exact for
// diagonal input.
std::array<double, 3> eigenvalues(const SymTensor3& t);

// w . T w
double quadratic_form(const SymTensor3& t, Vec3 w);

// a*t1 + (1-a)*t2
SymTensor3 convex_combine(double a, const SymTensor3& t1, const SymTensor3& t2);

} // namespace mixkin
