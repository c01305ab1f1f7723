#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mixkin/errors.hpp"
#include "mixkin/kernels.hpp"
#include "mixkin/vgrid.hpp"
#include "support/generators.hpp"

using namespace mixkin;
using kernels::Reduce;

namespace {

GridField noisy_field(const VelocityGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  GridField f(g.node_count());
  for (double& x : f) x = d(rng);
  return f;
}

} // namespace

TEST_CASE("length mismatches are rejected") {
  const VelocityGrid g = build_grid(3.0, 9);
  GridField wrong(10, 1.0);
  CHECK_THROWS_AS((void)kernels::integrate(g, wrong, Reduce::parallel), LengthMismatch);
  CHECK_THROWS_AS((void)kernels::moment_sums(g, wrong, Reduce::parallel), LengthMismatch);
  GridField f(g.node_count()), k(g.node_count());
  CHECK_THROWS_AS(kernels::axpy(f, 1.0, wrong, f), LengthMismatch);
  CHECK_THROWS_AS(kernels::sample_maxwellian(g, 1, Vec3{}, 1, 1, wrong), LengthMismatch);
}

TEST_CASE("map kernels agree bitwise between serial and parallel") {
  const VelocityGrid g = build_grid(5.0, 17);
  GridField a(g.node_count()), b(g.node_count());
  kernels::sample_maxwellian(g, 1.3, Vec3{0.2, -0.4, 0.7}, 1.1, 1.7, a, false);
  kernels::sample_maxwellian(g, 1.3, Vec3{0.2, -0.4, 0.7}, 1.1, 1.7, b, true);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));

  const SymTensor3 tau{1.4, 0.9, 1.1, 0.2, -0.1, 0.15};
  kernels::sample_gaussian(g, 0.8, Vec3{-0.1, 0.3, 0.0}, tau, 2.0, a, false);
  kernels::sample_gaussian(g, 0.8, Vec3{-0.1, 0.3, 0.0}, tau, 2.0, b, true);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));

  const GridField f = noisy_field(g, 1);
  const GridField k1 = noisy_field(g, 2), k2 = noisy_field(g, 3);
  const GridField k3 = noisy_field(g, 4), k4 = noisy_field(g, 5);
  GridField out1(f.size()), out2(f.size());
  kernels::rk4_combine(f, k1, k2, k3, k4, 0.37, out1, false);
  kernels::rk4_combine(f, k1, k2, k3, k4, 0.37, out2, true);
  CHECK(std::equal(out1.begin(), out1.end(), out2.begin()));

  kernels::relax_combine(f, k1, k2, 0.6, 1.7, out1, false);
  kernels::relax_combine(f, k1, k2, 0.6, 1.7, out2, true);
  CHECK(std::equal(out1.begin(), out1.end(), out2.begin()));
}

TEST_CASE("deterministic reductions do not depend on the thread count") {
  const VelocityGrid g = build_grid(4.0, 15);
  const GridField f = noisy_field(g, 99);

  auto snapshot = [&] {
    const kernels::MomentSums s = kernels::moment_sums(g, f, Reduce::deterministic);
    return std::array<double, 4>{kernels::integrate(g, f, Reduce::deterministic),
                                 kernels::entropy_sum(g, f, Reduce::deterministic),
                                 s.mx, s.sxy};
  };
#ifdef _OPENMP
  omp_set_num_threads(1);
  const auto one = snapshot();
  omp_set_num_threads(3);
  const auto three = snapshot();
  omp_set_num_threads(omp_get_num_procs());
  CHECK(one == three);  // bitwise
#else
  CHECK(snapshot() == snapshot());
#endif
}

TEST_CASE("the two reduction orders agree to rounding") {
  const VelocityGrid g = build_grid(4.0, 21);
  GridField f(g.node_count());
  kernels::sample_maxwellian(g, 2.0, Vec3{0.3, 0.0, -0.2}, 0.8, 1.0, f);
  const double det = kernels::integrate(g, f, Reduce::deterministic);
  const double par = kernels::integrate(g, f, Reduce::parallel);
  CHECK(det == doctest::Approx(par).epsilon(1e-13));

  const kernels::MomentSums a = kernels::moment_sums(g, f, Reduce::deterministic);
  const kernels::MomentSums b = kernels::moment_sums(g, f, Reduce::parallel);
  CHECK(a.mass == doctest::Approx(b.mass).epsilon(1e-13));
  CHECK(a.mx == doctest::Approx(b.mx).epsilon(1e-12));
  CHECK(a.sxx == doctest::Approx(b.sxx).epsilon(1e-12));
}

TEST_CASE("relax_combine treats an empty target as a zero rate") {
  const VelocityGrid g = build_grid(2.0, 9);
  const GridField f = noisy_field(g, 5);
  const GridField t = noisy_field(g, 6);
  GridField a(f.size()), b(f.size());
  kernels::relax_combine(f, t, {}, 2.0, 0.0, a);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(a[i] == 2.0 * (t[i] - f[i]));
  }
  kernels::relax_combine(f, {}, {}, 0.0, 0.0, b);
  CHECK(kernels::max_value(b) == 0.0);
  CHECK(kernels::min_value(b) == 0.0);
}

TEST_CASE("rk4_combine matches the textbook formula") {
  const GridField f{1.0, 2.0}, k1{0.5, -1.0}, k2{0.25, 0.5}, k3{0.1, 0.2}, k4{-0.3, 0.8};
  GridField out(2);
  const double dt = 0.6;
  kernels::rk4_combine(f, k1, k2, k3, k4, dt, out);
  for (int i = 0; i < 2; ++i) {
    const double want = f[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    CHECK(out[i] == doctest::Approx(want).epsilon(1e-16));
  }
}

TEST_CASE("axpy and scale do what they say") {
  GridField f{1.0, -2.0, 3.0}, k{0.5, 0.5, -0.5}, out(3);
  kernels::axpy(f, 2.0, k, out);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == -1.0);
  CHECK(out[2] == 2.0);
  kernels::scale(out, 0.5);
  CHECK(out[0] == 1.0);
  CHECK(out[2] == 1.0);
}

TEST_CASE("extrema are exact") {
  GridField f{0.3, -1.5, 2.0, 0.0};
  CHECK(kernels::min_value(f) == -1.5);
  CHECK(kernels::max_value(f) == 2.0);
}

TEST_CASE("entropy floor keeps empty regions silent") {
  const VelocityGrid g = build_grid(2.0, 9);
  GridField zero(g.node_count(), 0.0);
  CHECK(kernels::entropy_sum(g, zero, Reduce::deterministic) == 0.0);
  // log pairing of a zero distribution against a target is finite
  GridField tgt(g.node_count(), 0.5);
  const double lp = kernels::log_pairing_sum(g, zero, tgt, Reduce::deterministic);
  CHECK(std::isfinite(lp));
}

TEST_CASE("gaussian sampling rejects indefinite tensors") {
  const VelocityGrid g = build_grid(3.0, 9);
  GridField f(g.node_count());
  SymTensor3 bad{1.0, 1.0, -0.5, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(kernels::sample_gaussian(g, 1.0, Vec3{}, bad, 1.0, f), SingularTensor);
  CHECK_THROWS_AS(kernels::sample_gaussian(g, 1.0, Vec3{}, SymTensor3{}, 1.0, f),
                  SingularTensor);
}

TEST_CASE("gaussian with isotropic tensor routes to the maxwellian bitwise") {
  const VelocityGrid g = build_grid(5.0, 13);
  GridField a(g.node_count()), b(g.node_count());
  kernels::sample_gaussian(g, 1.7, Vec3{0.4, 0.0, -0.1}, SymTensor3::isotropic(1.3), 0.9, a);
  kernels::sample_maxwellian(g, 1.7, Vec3{0.4, 0.0, -0.1}, 1.3, 0.9, b);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
}

TEST_CASE("gaussian of a rotated tensor keeps its mass") {
  std::mt19937_64 rng(11);
  const VelocityGrid g = build_grid(9.0, 33);
  GridField f(g.node_count());
  for (int rep = 0; rep < 5; ++rep) {
    const SymTensor3 tau = testkit::random_spd(rng, 0.5, 1.5);
    kernels::sample_gaussian(g, 1.0, Vec3{}, tau, 1.0, f);
    CHECK(kernels::integrate(g, f, Reduce::deterministic) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }
}
