#pragma once

#include <span>

#include "mixkin/sym3.hpp"
#include "mixkin/vgrid.hpp"

// Velocity-space kernels. Every map kernel produces bitwise-identical output
// whether run serially or with OpenMP (elements are independent). Reductions
// come in two flavours: Reduce::parallel uses OpenMP reduction clauses (fast,
// order depends on the thread count) and Reduce::deterministic uses a fixed
// symmetric-pair order that is repeatable across thread counts and makes
// integrals of odd monomials cancel exactly.
namespace mixkin::kernels {

enum class Reduce { deterministic, parallel };

// Raw weighted sums of f against {1, v, v (x) v}.
struct MomentSums {
  double mass = 0.0;
  double mx = 0.0, my = 0.0, mz = 0.0;
  double sxx = 0.0, syy = 0.0, szz = 0.0;
  double sxy = 0.0, sxz = 0.0, syz = 0.0;
};

// Floor applied inside logarithms so empty regions contribute nothing.
inline constexpr double kEntropyFloor = 1e-300;

// ---- maps ----

// Maxwellian n * (m / 2 pi T)^{3/2} exp(-m |v-u|^2 / 2T), sampled at nodes.
void sample_maxwellian(const VelocityGrid& g, double n, Vec3 u, double temp,
                       double mass, std::span<double> out, bool parallel = true);

// Anisotropic Gaussian with relaxation tensor tau:
// n * (m / 2 pi)^{3/2} / sqrt(det tau) * exp(-m (v-u).tau^{-1}(v-u) / 2).
// Exactly isotropic tau routes through sample_maxwellian so the two agree
// bitwise. Throws SingularTensor unless tau is positive definite.
void sample_gaussian(const VelocityGrid& g, double n, Vec3 u, const SymTensor3& tau,
                     double mass, std::span<double> out, bool parallel = true);

void scale(std::span<double> f, double c, bool parallel = true);

// out = f + c * k
void axpy(std::span<const double> f, double c, std::span<const double> k,
          std::span<double> out, bool parallel = true);

// out = f + dt/6 * (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const double> f, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, double dt, std::span<double> out,
                 bool parallel = true);

// out = a_self * (t_self - f) + a_cross * (t_cross - f). An empty target
// span stands for a term whose coefficient is zero.
void relax_combine(std::span<const double> f, std::span<const double> t_self,
                   std::span<const double> t_cross, double a_self, double a_cross,
                   std::span<double> out, bool parallel = true);

// ---- reductions ----

double integrate(const VelocityGrid& g, std::span<const double> f, Reduce mode);

MomentSums moment_sums(const VelocityGrid& g, std::span<const double> f, Reduce mode);

// integral of f ln(max(f, floor))
double entropy_sum(const VelocityGrid& g, std::span<const double> f, Reduce mode);

// integral of ln(max(f, floor)) * (g_field - f); this is the quantity whose
// frequency-weighted combinations give the entropy production.
double log_pairing_sum(const VelocityGrid& g, std::span<const double> f,
                       std::span<const double> g_field, Reduce mode);

// Order-independent extrema (safe to run parallel always).
double min_value(std::span<const double> f);
double max_value(std::span<const double> f);

} // namespace mixkin::kernels
