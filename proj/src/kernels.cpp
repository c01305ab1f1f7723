#include "mixkin/kernels.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "mixkin/errors.hpp"

namespace mixkin::kernels {

namespace {

void check_field(const VelocityGrid& g, std::size_t size, const char* what) {
  if (size != g.node_count()) {
    throw LengthMismatch(std::string(what) + ": field length " + std::to_string(size) +
                         " does not match grid with " + std::to_string(g.node_count()) +
                         " nodes");
  }
}

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw LengthMismatch(std::string(what) + ": field lengths " + std::to_string(a) +
                         " and " + std::to_string(b) + " differ");
  }
}

// Deterministic triple reduction. Each axis is summed from the centre
// outwards in symmetric pairs, adding node(mid-k) + node(mid+k) before
// accumulating. Terms that are exactly antisymmetric under v -> -v cancel
// pairwise to +0.0, and the order never depends on threading.
template <std::size_t K, class Term>
std::array<double, K> mirror_reduce3(const VelocityGrid& g, Term&& term) {
  const int m = g.mid();
  auto line = [&](int iy, int iz) {
    std::array<double, K> acc = term(m, iy, iz);
    for (int k = 1; k <= m; ++k) {
      std::array<double, K> pair = term(m - k, iy, iz);
      const std::array<double, K> hi = term(m + k, iy, iz);
      for (std::size_t j = 0; j < K; ++j) acc[j] += pair[j] + hi[j];
    }
    return acc;
  };
  auto plane = [&](int iz) {
    std::array<double, K> acc = line(m, iz);
    for (int k = 1; k <= m; ++k) {
      const std::array<double, K> lo = line(m - k, iz);
      const std::array<double, K> hi = line(m + k, iz);
      for (std::size_t j = 0; j < K; ++j) acc[j] += lo[j] + hi[j];
    }
    return acc;
  };
  std::array<double, K> acc = plane(m);
  for (int k = 1; k <= m; ++k) {
    const std::array<double, K> lo = plane(m - k);
    const std::array<double, K> hi = plane(m + k);
    for (std::size_t j = 0; j < K; ++j) acc[j] += lo[j] + hi[j];
  }
  return acc;
}

} // namespace

void sample_maxwellian(const VelocityGrid& g, double n, Vec3 u, double temp,
                       double mass, std::span<double> out, bool parallel) {
  check_field(g, out.size(), "sample_maxwellian");
  const int nn = g.n;
  const double b = 0.5 * mass / temp;
  const double pref = n * std::pow(mass / (2.0 * std::numbers::pi * temp), 1.5);
  // The exponent separates per axis; precompute the three 1-D factors.
  std::vector<double> ex(nn), ey(nn), ez(nn);
  for (int i = 0; i < nn; ++i) {
    const double dx = g.axis[i] - u.x;
    const double dy = g.axis[i] - u.y;
    const double dz = g.axis[i] - u.z;
    ex[i] = std::exp(-b * dx * dx);
    ey[i] = std::exp(-b * dy * dy);
    ez[i] = std::exp(-b * dz * dz);
  }
#pragma omp parallel for collapse(2) if (parallel)
  for (int iz = 0; iz < nn; ++iz) {
    for (int iy = 0; iy < nn; ++iy) {
      const double pyz = pref * ez[iz] * ey[iy];
      const std::size_t base = (static_cast<std::size_t>(iz) * nn + iy) * nn;
      for (int ix = 0; ix < nn; ++ix) out[base + ix] = pyz * ex[ix];
    }
  }
}

void sample_gaussian(const VelocityGrid& g, double n, Vec3 u, const SymTensor3& tau,
                     double mass, std::span<double> out, bool parallel) {
  if (tau.is_diagonal() && tau.xx == tau.yy && tau.yy == tau.zz && tau.xx > 0.0) {
    // Isotropic tensor: identical to a Maxwellian at temperature tau_xx,
    // bitwise, via the same code path.
    sample_maxwellian(g, n, u, tau.xx, mass, out, parallel);
    return;
  }
  check_field(g, out.size(), "sample_gaussian");
  if (eigenvalues(tau)[0] <= 0.0) {
    throw SingularTensor("relaxation tensor is not positive definite");
  }
  const SymTensor3 inv = inverse(tau);
  const double d = det(tau);
  const double pref =
      n * std::pow(mass / (2.0 * std::numbers::pi), 1.5) / std::sqrt(d);
  const int nn = g.n;
  const double hm = 0.5 * mass;
#pragma omp parallel for collapse(2) if (parallel)
  for (int iz = 0; iz < nn; ++iz) {
    for (int iy = 0; iy < nn; ++iy) {
      const double dy = g.axis[iy] - u.y;
      const double dz = g.axis[iz] - u.z;
      // Quadratic form split into a per-line constant, the coefficient of
      // dx, and the dx^2 term.
      const double c0 = hm * (inv.yy * dy * dy + 2.0 * inv.yz * dy * dz + inv.zz * dz * dz);
      const double c1 = mass * (inv.xy * dy + inv.xz * dz);
      const std::size_t base = (static_cast<std::size_t>(iz) * nn + iy) * nn;
      for (int ix = 0; ix < nn; ++ix) {
        const double dx = g.axis[ix] - u.x;
        const double e = c0 + dx * (c1 + hm * inv.xx * dx);
        out[base + ix] = pref * std::exp(-e);
      }
    }
  }
}

void scale(std::span<double> f, double c, bool parallel) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) f[i] *= c;
}

void axpy(std::span<const double> f, double c, std::span<const double> k,
          std::span<double> out, bool parallel) {
  check_same(f.size(), k.size(), "axpy");
  check_same(f.size(), out.size(), "axpy");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f[i] + c * k[i];
}

void rk4_combine(std::span<const double> f, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, double dt, std::span<double> out,
                 bool parallel) {
  check_same(f.size(), k1.size(), "rk4_combine");
  check_same(f.size(), k2.size(), "rk4_combine");
  check_same(f.size(), k3.size(), "rk4_combine");
  check_same(f.size(), k4.size(), "rk4_combine");
  check_same(f.size(), out.size(), "rk4_combine");
  const double c = dt / 6.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = f[i] + c * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  }
}

void relax_combine(std::span<const double> f, std::span<const double> t_self,
                   std::span<const double> t_cross, double a_self, double a_cross,
                   std::span<double> out, bool parallel) {
  check_same(f.size(), out.size(), "relax_combine");
  const double* ps = nullptr;
  const double* pc = nullptr;
  if (!t_self.empty()) {
    check_same(f.size(), t_self.size(), "relax_combine");
    ps = t_self.data();
  }
  if (!t_cross.empty()) {
    check_same(f.size(), t_cross.size(), "relax_combine");
    pc = t_cross.data();
  }
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double fi = f[i];
    double r = 0.0;
    if (ps) r += a_self * (ps[i] - fi);
    if (pc) r += a_cross * (pc[i] - fi);
    out[i] = r;
  }
}

double integrate(const VelocityGrid& g, std::span<const double> f, Reduce mode) {
  check_field(g, f.size(), "integrate");
  const int nn = g.n;
  const double* wv = g.axis_w.data();
  if (mode == Reduce::deterministic) {
    auto term = [&](int ix, int iy, int iz) -> std::array<double, 1> {
      const double w = wv[ix] * wv[iy] * wv[iz];
      return {w * f[g.index(ix, iy, iz)]};
    };
    return mirror_reduce3<1>(g, term)[0];
  }
  double s = 0.0;
#pragma omp parallel for collapse(2) reduction(+ : s)
  for (int iz = 0; iz < nn; ++iz) {
    for (int iy = 0; iy < nn; ++iy) {
      const double wyz = wv[iy] * wv[iz];
      const std::size_t base = (static_cast<std::size_t>(iz) * nn + iy) * nn;
      double acc = 0.0;
      for (int ix = 0; ix < nn; ++ix) acc += wv[ix] * f[base + ix];
      s += wyz * acc;
    }
  }
  return s;
}

MomentSums moment_sums(const VelocityGrid& g, std::span<const double> f, Reduce mode) {
  check_field(g, f.size(), "moment_sums");
  const int nn = g.n;
  const double* wv = g.axis_w.data();
  const double* av = g.axis.data();
  if (mode == Reduce::deterministic) {
    auto term = [&](int ix, int iy, int iz) -> std::array<double, 10> {
      const double vx = av[ix], vy = av[iy], vz = av[iz];
      const double t = wv[ix] * wv[iy] * wv[iz] * f[g.index(ix, iy, iz)];
      const double tx = t * vx, ty = t * vy, tz = t * vz;
      return {t,       tx,      ty,      tz,      tx * vx,
              ty * vy, tz * vz, tx * vy, tx * vz, ty * vz};
    };
    const std::array<double, 10> s = mirror_reduce3<10>(g, term);
    return {s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7], s[8], s[9]};
  }
  double m = 0, mx = 0, my = 0, mz = 0;
  double sxx = 0, syy = 0, szz = 0, sxy = 0, sxz = 0, syz = 0;
#pragma omp parallel for collapse(2) \
    reduction(+ : m, mx, my, mz, sxx, syy, szz, sxy, sxz, syz)
  for (int iz = 0; iz < nn; ++iz) {
    for (int iy = 0; iy < nn; ++iy) {
      const double vy = av[iy], vz = av[iz];
      const double wyz = wv[iy] * wv[iz];
      const std::size_t base = (static_cast<std::size_t>(iz) * nn + iy) * nn;
      // vy and vz are constant along the line, so three line sums carry
      // everything: against 1, v_x and v_x^2.
      double lm = 0, lx = 0, lxx = 0;
      for (int ix = 0; ix < nn; ++ix) {
        const double vx = av[ix];
        const double t = wv[ix] * f[base + ix];
        lm += t;
        lx += t * vx;
        lxx += t * vx * vx;
      }
      m += wyz * lm;
      mx += wyz * lx;
      my += wyz * lm * vy;
      mz += wyz * lm * vz;
      sxx += wyz * lxx;
      syy += wyz * lm * vy * vy;
      szz += wyz * lm * vz * vz;
      sxy += wyz * lx * vy;
      sxz += wyz * lx * vz;
      syz += wyz * lm * vy * vz;
    }
  }
  return {m, mx, my, mz, sxx, syy, szz, sxy, sxz, syz};
}

double entropy_sum(const VelocityGrid& g, std::span<const double> f, Reduce mode) {
  check_field(g, f.size(), "entropy_sum");
  const int nn = g.n;
  const double* wv = g.axis_w.data();
  if (mode == Reduce::deterministic) {
    auto term = [&](int ix, int iy, int iz) -> std::array<double, 1> {
      const double fi = f[g.index(ix, iy, iz)];
      const double w = wv[ix] * wv[iy] * wv[iz];
      return {w * fi * std::log(std::max(fi, kEntropyFloor))};
    };
    return mirror_reduce3<1>(g, term)[0];
  }
  double s = 0.0;
#pragma omp parallel for collapse(2) reduction(+ : s)
  for (int iz = 0; iz < nn; ++iz) {
    for (int iy = 0; iy < nn; ++iy) {
      const double wyz = wv[iy] * wv[iz];
      const std::size_t base = (static_cast<std::size_t>(iz) * nn + iy) * nn;
      double acc = 0.0;
      for (int ix = 0; ix < nn; ++ix) {
        const double fi = f[base + ix];
        acc += wv[ix] * fi * std::log(std::max(fi, kEntropyFloor));
      }
      s += wyz * acc;
    }
  }
  return s;
}

double log_pairing_sum(const VelocityGrid& g, std::span<const double> f,
                       std::span<const double> g_field, Reduce mode) {
  check_field(g, f.size(), "log_pairing_sum");
  check_same(f.size(), g_field.size(), "log_pairing_sum");
  const int nn = g.n;
  const double* wv = g.axis_w.data();
  if (mode == Reduce::deterministic) {
    auto term = [&](int ix, int iy, int iz) -> std::array<double, 1> {
      const std::size_t i = g.index(ix, iy, iz);
      const double fi = f[i];
      const double w = wv[ix] * wv[iy] * wv[iz];
      return {w * std::log(std::max(fi, kEntropyFloor)) * (g_field[i] - fi)};
    };
    return mirror_reduce3<1>(g, term)[0];
  }
  double s = 0.0;
#pragma omp parallel for collapse(2) reduction(+ : s)
  for (int iz = 0; iz < nn; ++iz) {
    for (int iy = 0; iy < nn; ++iy) {
      const double wyz = wv[iy] * wv[iz];
      const std::size_t base = (static_cast<std::size_t>(iz) * nn + iy) * nn;
      double acc = 0.0;
      for (int ix = 0; ix < nn; ++ix) {
        const double fi = f[base + ix];
        acc += wv[ix] * std::log(std::max(fi, kEntropyFloor)) * (g_field[base + ix] - fi);
      }
      s += wyz * acc;
    }
  }
  return s;
}

double min_value(std::span<const double> f) {
  double m = f.empty() ? 0.0 : f[0];
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for reduction(min : m)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::min(m, f[i]);
  return m;
}

double max_value(std::span<const double> f) {
  double m = f.empty() ? 0.0 : f[0];
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for reduction(max : m)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, f[i]);
  return m;
}

} // namespace mixkin::kernels
