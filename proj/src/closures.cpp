#include "mixkin/closures.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <string>

#include "mixkin/errors.hpp"

namespace mixkin {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

bool uses_gaussian_self(Variant v) { return v != Variant::bgk; }

bool uses_gaussian_cross(Variant v) {
  return v == Variant::es_full_a || v == Variant::es_full_b;
}

Frequencies frequencies(const MixtureConfig& c) {
  Frequencies f;
  f.nu12 = c.nu12;
  f.nu21 = c.nu12 / c.eps;
  f.nu11 = c.beta1 * f.nu12;
  f.nu22 = c.beta2 * f.nu21;
  return f;
}

double delta_lower_bound(double m1, double m2, double eps) {
  const double r = m1 / m2 * eps;
  return (r - 1.0) / (1.0 + r);
}

double gamma_upper_bound(double m1, double m2, double eps, double delta) {
  const double r = m1 / m2 * eps;
  return m1 / 3.0 * (1.0 - delta) * ((1.0 + r) * delta + 1.0 - r);
}

std::vector<Violation> validate_config(const MixtureConfig& c) {
  std::vector<Violation> v;
  auto bad = [&v](const char* param, const std::string& msg) {
    v.push_back({param, msg});
  };
  if (!(c.m1 > 0.0)) bad("m1", "mass m1 = " + fmt(c.m1) + " must be positive");
  if (!(c.m2 > 0.0)) bad("m2", "mass m2 = " + fmt(c.m2) + " must be positive");
  if (!(c.nu12 > 0.0)) bad("nu12", "collision frequency nu12 = " + fmt(c.nu12) + " must be positive");
  if (!(c.eps > 0.0 && c.eps <= 1.0)) {
    bad("eps", "frequency ratio eps = " + fmt(c.eps) + " must lie in (0, 1]");
  }
  if (!(c.beta1 > 0.0)) bad("beta1", "beta1 = " + fmt(c.beta1) + " must be positive");
  if (!(c.beta2 > 0.0)) bad("beta2", "beta2 = " + fmt(c.beta2) + " must be positive");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) {
    bad("alpha", "alpha = " + fmt(c.alpha) + " must lie in [0, 1]");
  }
  const bool window_inputs_ok = c.m1 > 0.0 && c.m2 > 0.0 && c.eps > 0.0 && c.eps <= 1.0;
  if (window_inputs_ok) {
    const double lo = delta_lower_bound(c.m1, c.m2, c.eps);
    if (!(c.delta >= lo && c.delta <= 1.0)) {
      bad("delta", "delta = " + fmt(c.delta) + " must lie in [" + fmt(lo) + ", 1]");
    }
    if (!(c.gamma >= 0.0)) {
      bad("gamma", "gamma = " + fmt(c.gamma) + " must be nonnegative");
    } else if (c.delta >= lo && c.delta <= 1.0) {
      const double hi = gamma_upper_bound(c.m1, c.m2, c.eps, c.delta);
      if (!(c.gamma <= hi)) {
        bad("gamma", "gamma = " + fmt(c.gamma) + " must lie in [0, " + fmt(hi) + "]");
      }
    }
  } else {
    if (!(c.delta <= 1.0)) bad("delta", "delta = " + fmt(c.delta) + " must not exceed 1");
    if (!(c.gamma >= 0.0)) bad("gamma", "gamma = " + fmt(c.gamma) + " must be nonnegative");
  }
  if (uses_gaussian_self(c.variant)) {
    if (!(c.mu1 >= -0.5 && c.mu1 <= 1.0)) {
      bad("mu1", "mu1 = " + fmt(c.mu1) + " must lie in [-1/2, 1]");
    }
    if (!(c.mu2 >= -0.5 && c.mu2 <= 1.0)) {
      bad("mu2", "mu2 = " + fmt(c.mu2) + " must lie in [-1/2, 1]");
    }
  }
  return v;
}

Vec3 interspecies_velocity_12(Vec3 u1, Vec3 u2, double delta) {
  return delta * u1 + (1.0 - delta) * u2;
}

Vec3 interspecies_velocity_21(Vec3 u1, Vec3 u2, double delta, double eps, double m1,
                              double m2) {
  const double c = m1 / m2 * eps * (1.0 - delta);
  return u2 - c * (u2 - u1);
}

double interspecies_temperature_12(double t1, double t2, double alpha, double gamma,
                                   double du2) {
  const double t = alpha * t1 + (1.0 - alpha) * t2 + gamma * du2;
  if (!(t > 0.0)) {
    throw NonpositiveTemperature("interspecies temperature T12 = " + fmt(t));
  }
  return t;
}

double t21_du2_coefficient(double m1, double m2, double eps, double delta, double gamma,
                           double alpha) {
  (void)alpha;
  const double r = m1 / m2 * eps;
  return eps * m1 / 3.0 * (1.0 - delta) * (r * (delta - 1.0) + delta + 1.0) - eps * gamma;
}

double interspecies_temperature_21(double t1, double t2, double alpha, double gamma,
                                   double delta, double eps, double m1, double m2,
                                   double du2) {
  const double c = t21_du2_coefficient(m1, m2, eps, delta, gamma, alpha);
  const double ea = eps * (1.0 - alpha);
  const double t = c * du2 + ea * t1 + (1.0 - ea) * t2;
  if (!(t > 0.0)) {
    throw NonpositiveTemperature("interspecies temperature T21 = " + fmt(t));
  }
  return t;
}

GridField build_maxwellian(double n, Vec3 u, double temp, double mass,
                           const VelocityGrid& g, bool mass_exact,
                           kernels::Reduce mode, bool parallel) {
  assert(n > 0.0 && temp > 0.0 && mass > 0.0);
  GridField f(g.node_count());
  kernels::sample_maxwellian(g, n, u, temp, mass, f, parallel);
  if (mass_exact) {
    const double tot = kernels::integrate(g, f, mode);
    if (tot > 0.0) kernels::scale(f, n / tot, parallel);
  }
  return f;
}

GridField build_gaussian(double n, Vec3 u, const SymTensor3& tau, double mass,
                         const VelocityGrid& g, bool mass_exact,
                         kernels::Reduce mode, bool parallel) {
  assert(n > 0.0 && mass > 0.0);
  GridField f(g.node_count());
  kernels::sample_gaussian(g, n, u, tau, mass, f, parallel);
  if (mass_exact) {
    const double tot = kernels::integrate(g, f, mode);
    if (tot > 0.0) kernels::scale(f, n / tot, parallel);
  }
  return f;
}

SymTensor3 tensor_single(const Moments& m, double mu) {
  const double a = 1.0 - mu;
  const double inv_n = 1.0 / m.n;
  return {a * m.T + mu * (m.P.xx * inv_n), a * m.T + mu * (m.P.yy * inv_n),
          a * m.T + mu * (m.P.zz * inv_n), mu * (m.P.xy * inv_n),
          mu * (m.P.xz * inv_n),           mu * (m.P.yz * inv_n)};
}

double mu12_restriction(const MixtureConfig& c, double n1, double n2) {
  const Frequencies f = frequencies(c);
  return 1.0 + (1.0 - c.mu1) * (n1 / n2) * (f.nu11 / f.nu12);
}

Mu21Solution solve_mu21_roots(const MixtureConfig& c, double n1, double n2) {
  const Frequencies f = frequencies(c);
  const double mu12 = c.mu12 ? *c.mu12 : mu12_restriction(c, n1, n2);
  // Coefficients of the conservation quadratic for mu21.
  const double a1 = n1 * f.nu12 * (1.0 / c.eps - 1.0 + c.alpha);
  const double a0 = (c.mu2 - 1.0) * n2 * f.nu22;
  const double b1 = n1 * f.nu12 * ((c.alpha - 1.0) * n1 + n2 / c.eps);
  const double b0 = -n1 * f.nu12 * n2 / c.eps + (c.mu2 - 1.0) * n2 * n2 * f.nu22;
  const double scale12 = n1 / (n2 * n2);
  const double c2 = scale12 * a1 * b1;
  const double c1 = scale12 * (a1 * b0 + a0 * b1);
  const double c0 = scale12 * a0 * b0 -
                    (c.alpha - 1.0) * (c.alpha - 1.0) * mu12 * mu12 * n2 * n2 * f.nu12 * f.nu12;

  Mu21Solution sol;
  const double mag = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (mag == 0.0) {
    // Conservation holds for any value; pick the isotropic one.
    sol.linear = true;
    return sol;
  }
  const double window = 1e-12;
  if (std::abs(c2) <= 1e-14 * mag) {
    sol.linear = true;
    if (std::abs(c1) <= 1e-14 * mag) {
      throw NoAdmissibleMu21("mu21 equation degenerated to " + fmt(c0) + " = 0");
    }
    const double r = -c0 / c1;
    sol.roots = {r, r};
    sol.real_roots = 1;
    if (!(r >= -window && r <= 1.0 + window)) {
      throw NoAdmissibleMu21("mu21 root " + fmt(r) + " lies outside [0, 1]");
    }
    sol.selected = r;
    return sol;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) {
    throw NoAdmissibleMu21("mu21 quadratic has no real roots (discriminant " + fmt(disc) + ")");
  }
  const double s = std::sqrt(disc);
  const double q = -0.5 * (c1 + std::copysign(s, c1));
  double r1, r2;
  if (q != 0.0) {
    r1 = q / c2;
    r2 = c0 / q;
  } else {
    r1 = r2 = 0.0;  // c1 == 0 and disc == 0
  }
  sol.roots = {r1, r2};
  sol.real_roots = 2;
  bool found = false;
  for (double r : sol.roots) {
    if (!(r >= -window && r <= 1.0 + window)) continue;
    if (!found || std::abs(r) < std::abs(sol.selected)) sol.selected = r;
    found = true;
  }
  if (!found) {
    throw NoAdmissibleMu21("no mu21 root in [0, 1]; roots " + fmt(r1) + ", " + fmt(r2));
  }
  return sol;
}

double solve_mu21_restriction(const MixtureConfig& c, double n1, double n2) {
  return solve_mu21_roots(c, n1, n2).selected;
}

InterspeciesTensors tensor_interspecies_a(const Moments& m1, const Moments& m2,
                                          const MixtureConfig& c, double du2) {
  InterspeciesTensors out;
  out.mu12 = c.mu12 ? *c.mu12 : mu12_restriction(c, m1.n, m2.n);
  out.mu21 = c.mu21 ? *c.mu21 : solve_mu21_restriction(c, m1.n, m2.n);

  const double a = c.alpha;
  const double tbar = a * m1.T + (1.0 - a) * m2.T;
  const SymTensor3 pbar = (1.0 / m1.n) * (convex_combine(a, m1.P, m2.P));
  const double iso12 = (1.0 - out.mu12) * tbar + c.gamma * du2;
  out.t12 = SymTensor3::isotropic(iso12) + out.mu12 * pbar;

  const double ea = c.eps * (1.0 - a);
  const double theta = ea * m1.T + (1.0 - ea) * m2.T;
  const SymTensor3 pi = (1.0 / m2.n) * convex_combine(ea, m1.P, m2.P);
  const double c21 = t21_du2_coefficient(c.m1, c.m2, c.eps, c.delta, c.gamma, c.alpha);
  const double iso21 = (1.0 - out.mu21) * theta + c21 * du2;
  out.t21 = SymTensor3::isotropic(iso21) + out.mu21 * pi;
  return out;
}

InterspeciesTensors tensor_interspecies_b(const Moments& m1, const Moments& m2,
                                          const MixtureConfig& c, double du2) {
  InterspeciesTensors out;
  out.mu12 = std::nan("");
  out.mu21 = std::nan("");

  const double a = c.alpha;
  const double iso12 = (1.0 - a) * m2.T + c.gamma * du2;
  out.t12 = SymTensor3::isotropic(iso12) + (a / m1.n) * m1.P;

  const double ea = c.eps * (1.0 - a);
  const double c21 = t21_du2_coefficient(c.m1, c.m2, c.eps, c.delta, c.gamma, c.alpha);
  const double iso21 = ea * m1.T + c21 * du2;
  out.t21 = SymTensor3::isotropic(iso21) + ((1.0 - ea) / m2.n) * m2.P;
  return out;
}

} // namespace mixkin
