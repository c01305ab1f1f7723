#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mixkin/kernels.hpp"
#include "mixkin/moments.hpp"
#include "mixkin/sym3.hpp"
#include "mixkin/vgrid.hpp"

namespace mixkin {

// Which relaxation targets the collision operator uses.
//   bgk        - Maxwellians everywhere
//   es_single  - anisotropic Gaussians for the self targets only
//   es_full_a  - Gaussians everywhere; interspecies tensors mix the scalar
//                temperature with the combined pressure tensor, coefficients
//                fixed by conservation restrictions
//   es_full_b  - Gaussians everywhere; interspecies tensors are convex
//                combinations of one species' pressure tensor and the other's
//                temperature
enum class Variant { bgk, es_single, es_full_a, es_full_b };

// All free parameters of the two-species model. The interspecies collision
// frequency is stored once as nu12; nu21 = nu12 / eps, nu11 = beta1 * nu12,
// nu22 = beta2 * nu21.
struct MixtureConfig {
  double m1 = 1.0, m2 = 1.0;  // particle masses
  double nu12 = 1.0;          // base interspecies frequency
  double eps = 1.0;           // nu12 / nu21, in (0, 1]
  double beta1 = 1.0, beta2 = 1.0;
  double delta = 0.5;  // mixing weight of the interspecies velocity
  double alpha = 0.5;  // mixing weight of the interspecies temperature
  double gamma = 0.0;  // coefficient of |u1 - u2|^2 in the temperature
  double mu1 = 0.0, mu2 = 0.0;  // self-target anisotropy, in [-1/2, 1]
  // es_full_a only: when unset, mu12 follows from its restriction and mu21
  // from the conservation quadratic.
  std::optional<double> mu12;
  std::optional<double> mu21;
  Variant variant = Variant::bgk;

  bool operator==(const MixtureConfig&) const = default;
};

bool uses_gaussian_self(Variant v);
bool uses_gaussian_cross(Variant v);

// The four relaxation rates implied by a config. Kept as a separate struct
// so the collision right-hand side can also be driven with explicit rates
// (e.g. zeroed ones) without touching config validation.
struct Frequencies {
  double nu11 = 0.0, nu12 = 0.0, nu21 = 0.0, nu22 = 0.0;
};

Frequencies frequencies(const MixtureConfig& c);

// Lower end of the admissible delta window, (r - 1) / (1 + r) with
// r = (m1/m2) eps.
double delta_lower_bound(double m1, double m2, double eps);

// Upper end of the admissible gamma window,
// (m1/3) (1 - delta) [(1 + r) delta + 1 - r].
double gamma_upper_bound(double m1, double m2, double eps, double delta);

struct Violation {
  std::string parameter;
  std::string message;
};

// Every bound violated by the config, each naming the parameter and the
// bound. Empty means admissible.
std::vector<Violation> validate_config(const MixtureConfig& c);

// ---- interspecies moments ----

// u12 = delta u1 + (1 - delta) u2
Vec3 interspecies_velocity_12(Vec3 u1, Vec3 u2, double delta);

// u21 = u2 - (m1/m2) eps (1 - delta) (u2 - u1)
Vec3 interspecies_velocity_21(Vec3 u1, Vec3 u2, double delta, double eps, double m1,
                              double m2);

// T12 = alpha T1 + (1 - alpha) T2 + gamma |u1 - u2|^2. du2 is |u1 - u2|^2,
// passed explicitly so all targets of one step share the same value.
// Throws NonpositiveTemperature if the result is not positive.
double interspecies_temperature_12(double t1, double t2, double alpha, double gamma,
                                   double du2);

// Coefficient of |u1 - u2|^2 in T21; its sign window is what the gamma bound
// protects.
double t21_du2_coefficient(double m1, double m2, double eps, double delta, double gamma,
                           double alpha);

// T21 = eps(1-alpha) T1 + (1 - eps(1-alpha)) T2 + coef * |u1 - u2|^2.
// Throws NonpositiveTemperature if the result is not positive.
double interspecies_temperature_21(double t1, double t2, double alpha, double gamma,
                                   double delta, double eps, double m1, double m2,
                                   double du2);

// ---- discrete targets ----

// Sampled Maxwellian. With mass_exact the field is rescaled so its discrete
// integral equals n; the integral for the rescale uses `mode`.
GridField build_maxwellian(double n, Vec3 u, double temp, double mass,
                           const VelocityGrid& g, bool mass_exact = false,
                           kernels::Reduce mode = kernels::Reduce::parallel,
                           bool parallel = true);

// Sampled anisotropic Gaussian; exactly isotropic tensors reduce to the
// Maxwellian bitwise. Throws SingularTensor unless tau is positive definite.
GridField build_gaussian(double n, Vec3 u, const SymTensor3& tau, double mass,
                         const VelocityGrid& g, bool mass_exact = false,
                         kernels::Reduce mode = kernels::Reduce::parallel,
                         bool parallel = true);

// Self-target tensor (1 - mu) T I + mu P/n. Positive definite for
// mu in [-1/2, 1] whenever P is.
SymTensor3 tensor_single(const Moments& m, double mu);

// ---- interspecies tensors ----

struct InterspeciesTensors {
  SymTensor3 t12, t21;
  // Coefficients actually used (variant A); NaN for variant B.
  double mu12 = 0.0, mu21 = 0.0;
};

// mu12 restriction for variant A: 1 + (1 - mu1) (n1/n2) (nu11/nu12).
double mu12_restriction(const MixtureConfig& c, double n1, double n2);

// Roots of the conservation quadratic for mu21 (variant A).
struct Mu21Solution {
  double selected = 0.0;
  std::array<double, 2> roots = {0.0, 0.0};
  int real_roots = 0;
  bool linear = false;  // leading coefficient degenerated
};

// Solves the quadratic and picks the admissible root in [0, 1]; ties go to
// the smaller magnitude. Throws NoAdmissibleMu21 when no real root lands in
// the window.
Mu21Solution solve_mu21_roots(const MixtureConfig& c, double n1, double n2);
double solve_mu21_restriction(const MixtureConfig& c, double n1, double n2);

// Variant A tensors: scalar/tensor mixtures with coefficients mu12, mu21
// (explicit in the config or resolved from the restrictions).
InterspeciesTensors tensor_interspecies_a(const Moments& m1, const Moments& m2,
                                          const MixtureConfig& c, double du2);

// Variant B tensors: convex combinations P1/n1 vs T2 (and mirrored), plus
// the |u1-u2|^2 isotropic parts.
InterspeciesTensors tensor_interspecies_b(const Moments& m1, const Moments& m2,
                                          const MixtureConfig& c, double du2);

} // namespace mixkin
