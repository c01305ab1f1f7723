#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "mixkin/closures.hpp"
#include "mixkin/collision.hpp"
#include "mixkin/errors.hpp"
#include "support/generators.hpp"

using namespace mixkin;

namespace {

// A well-resolved grid for two species with gaps: u in [-0.5, 0.5], T up to 2.
VelocityGrid wide_grid(int points = 33) { return build_grid(10.5, points); }

MixtureState gapped_state(const VelocityGrid& g, double m1 = 1.0, double m2 = 1.5,
                          kernels::Reduce mode = kernels::Reduce::parallel) {
  GridField f1 = build_maxwellian(1.0, Vec3{0.5, 0.0, 0.0}, 1.0, m1, g, true, mode);
  GridField f2 = build_maxwellian(1.3, Vec3{-0.5, 0.2, 0.0}, 2.0, m2, g, true, mode);
  return MixtureState(g, m1, m2, std::move(f1), std::move(f2), mode);
}

double peak_rate(const MixtureState& s, const MixtureConfig& c) {
  const Frequencies f = frequencies(c);
  const double r1 = f.nu11 * s.moments1().n + f.nu12 * s.moments2().n;
  const double r2 = f.nu22 * s.moments2().n + f.nu21 * s.moments1().n;
  return std::max(r1, r2) * std::max(kernels::max_value(s.f1()), kernels::max_value(s.f2()));
}

} // namespace

TEST_CASE("a shared equilibrium is a fixed point of the operator") {
  // Equal densities: the tensor mixtures normalize the combined stress by one
  // species' density, so unequal densities shift the variant A targets.
  const VelocityGrid g = build_grid(8.2, 33);
  const Vec3 u{0.2, 0.0, 0.0};
  GridField f1 = build_maxwellian(1.0, u, 1.0, 1.0, g, true);
  GridField f2 = build_maxwellian(1.0, u, 1.0, 1.5, g, true);
  MixtureState s(g, 1.0, 1.5, std::move(f1), std::move(f2));

  for (Variant v : {Variant::bgk, Variant::es_single, Variant::es_full_a,
                    Variant::es_full_b}) {
    MixtureConfig c;
    c.m2 = 1.5;
    c.variant = v;
    // The restricted variant resolves mu21 from its conservation quadratic,
    // which has no admissible root for most nonzero (mu1, mu2) pairs; keep
    // its self targets scalar and exercise the cross tensors only.
    if (uses_gaussian_self(v) && v != Variant::es_full_a) {
      c.mu1 = 0.3;
      c.mu2 = -0.2;
    }
    const auto [r1, r2] = rhs(s, c);
    const double scale = peak_rate(s, c);
    CHECK(std::max(std::abs(kernels::min_value(r1)), kernels::max_value(r1)) < 1e-9 * scale);
    CHECK(std::max(std::abs(kernels::min_value(r2)), kernels::max_value(r2)) < 1e-9 * scale);
  }
}

TEST_CASE("maxwellian targets and mu = 0 gaussian targets coincide bitwise") {
  const VelocityGrid g = wide_grid(25);
  MixtureState s = gapped_state(g);
  MixtureConfig bgk;
  bgk.m2 = 1.5;
  MixtureConfig es = bgk;
  es.variant = Variant::es_single;  // mu1 = mu2 = 0

  const auto [b1, b2] = rhs(s, bgk);
  const auto [e1, e2] = rhs(s, es);
  CHECK(std::equal(b1.begin(), b1.end(), e1.begin()));
  CHECK(std::equal(b2.begin(), b2.end(), e2.begin()));
}

TEST_CASE("explicit rates switch channels off") {
  const VelocityGrid g = wide_grid(17);
  MixtureState s = gapped_state(g);
  MixtureConfig c;
  c.m2 = 1.5;

  SUBCASE("no rates, no change") {
    const auto [r1, r2] = rhs(s, c, Frequencies{});
    CHECK(kernels::max_value(r1) == 0.0);
    CHECK(kernels::min_value(r1) == 0.0);
    CHECK(kernels::max_value(r2) == 0.0);
  }

  SUBCASE("self-only rates leave the other species alone") {
    Frequencies f;
    f.nu11 = 2.0;
    const auto [r1, r2] = rhs(s, c, f);
    CHECK(kernels::max_value(r1) > 0.0);
    CHECK(kernels::max_value(r2) == 0.0);
    const TargetSet ts = build_targets(g, s.moments1(), s.moments2(), 1.0, 1.5, c, f);
    CHECK(ts.cross12.empty());
    CHECK(ts.cross21.empty());
    CHECK(!ts.self1.empty());
    CHECK(ts.self2.empty());
  }
}

TEST_CASE("relaxation combination follows its formula") {
  const VelocityGrid g = build_grid(2.0, 9);
  const std::size_t n = g.node_count();
  GridField f1(n, 0.5), f2(n, 0.25), self(n, 1.0), cross(n, 2.0);
  TargetSet ts;
  ts.self1 = self;
  ts.cross12 = cross;
  ts.self2 = self;  // species 2: self only
  ts.freqs.nu11 = 2.0;
  ts.freqs.nu12 = 3.0;
  ts.freqs.nu22 = 4.0;
  ts.freqs.nu21 = 5.0;  // cross21 empty: zero contribution despite the rate
  GridField out1(n), out2(n);
  apply_relaxation(ts, f1, f2, 10.0, 20.0, out1, out2);
  // out1 = nu11*n1*(self - f1) + nu12*n2*(cross - f1)
  CHECK(out1[0] == doctest::Approx(2.0 * 10.0 * 0.5 + 3.0 * 20.0 * 1.5).epsilon(1e-14));
  // out2 = nu22*n2*(self - f2) only
  CHECK(out2[0] == doctest::Approx(4.0 * 20.0 * 0.75).epsilon(1e-14));
}

TEST_CASE("swapping the species mirrors the cross targets at eps = 1") {
  const VelocityGrid g = wide_grid(29);
  MixtureConfig c;
  c.m1 = 1.0;
  c.m2 = 2.0;
  c.delta = 0.3;
  c.alpha = 0.4;
  c.gamma = 0.02;
  c.beta1 = 1.4;
  c.beta2 = 0.7;
  REQUIRE(validate_config(c).empty());

  MixtureConfig swapped;
  swapped.m1 = c.m2;
  swapped.m2 = c.m1;
  swapped.nu12 = c.nu12;  // eps = 1 keeps both cross rates equal
  swapped.beta1 = c.beta2;
  swapped.beta2 = c.beta1;
  swapped.delta = 1.0 - (c.m1 / c.m2) * (1.0 - c.delta);
  swapped.alpha = c.alpha;
  swapped.gamma = t21_du2_coefficient(c.m1, c.m2, c.eps, c.delta, c.gamma, c.alpha);
  REQUIRE(validate_config(swapped).empty());

  GridField f1 = build_maxwellian(1.0, Vec3{0.5, 0.1, 0.0}, 1.0, c.m1, g, true);
  GridField f2 = build_maxwellian(1.3, Vec3{-0.4, 0.0, 0.2}, 1.7, c.m2, g, true);
  MixtureState fwd(g, c.m1, c.m2, f1, f2);
  MixtureState rev(g, swapped.m1, swapped.m2, f2, f1);

  const TargetSet& tf = fwd.targets(c);
  const TargetSet& tr = rev.targets(swapped);
  // the (2 <- 1) target of the forward system is the (1 <- 2) target of the
  // swapped one
  REQUIRE(tf.cross21.size() == tr.cross12.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < tf.cross21.size(); ++i) {
    worst = std::max(worst, std::abs(tf.cross21[i] - tr.cross12[i]));
  }
  CHECK(worst < 1e-12 * kernels::max_value(tf.cross21));
  CHECK(max_abs(tf.u21 - tr.u12) < 1e-14);
  CHECK(tf.t21 == doctest::Approx(tr.t12).epsilon(1e-13));
}

TEST_CASE("the target cache serves repeated reads and tracks field changes") {
  const VelocityGrid g = wide_grid(17);
  MixtureState s = gapped_state(g);
  MixtureConfig c;
  c.m2 = 1.5;

  const std::uint64_t v0 = s.version();
  const TargetSet& a = s.targets(c);
  const TargetSet& b = s.targets(c);
  CHECK(&a == &b);  // cached
  const double t12_before = a.t12;

  GridField f1 = build_maxwellian(1.0, Vec3{0.1, 0.0, 0.0}, 1.2, 1.0, g, true);
  GridField f2 = build_maxwellian(1.3, Vec3{-0.1, 0.0, 0.0}, 1.9, 1.5, g, true);
  s.set_fields(std::move(f1), std::move(f2));
  CHECK(s.version() > v0);
  const double t12_after = s.targets(c).t12;
  CHECK(t12_after != t12_before);

  // a different variant misses the cache but shares the scalar closure
  MixtureConfig es = c;
  es.variant = Variant::es_full_b;
  CHECK(s.targets(es).t12 == doctest::Approx(t12_after).epsilon(1e-15));
}

TEST_CASE("collision invariants are conserved across all variants") {
  const VelocityGrid g = wide_grid(33);
  for (Variant v : {Variant::bgk, Variant::es_single, Variant::es_full_a,
                    Variant::es_full_b}) {
    // equal densities keep variant A's combined-stress normalization exact
    GridField f1 = build_maxwellian(1.0, Vec3{0.5, 0.0, 0.0}, 1.0, 1.0, g, true);
    GridField f2 = build_maxwellian(1.0, Vec3{-0.5, 0.2, 0.0}, 2.0, 1.5, g, true);
    MixtureState s(g, 1.0, 1.5, std::move(f1), std::move(f2));
    MixtureConfig c;
    c.m2 = 1.5;
    c.gamma = 0.05;
    c.variant = v;
    if (uses_gaussian_self(v) && v != Variant::es_full_a) {
      c.mu1 = 0.3;  // no admissible mu21 root for these under the restriction
      c.mu2 = -0.2;
    }
    const InvariantRates r = collision_invariants_residual(s, c);
    const Moments& m1 = s.moments1();
    const Moments& m2 = s.moments2();
    const Frequencies f = frequencies(c);
    const double rate = f.nu12 * m1.n * m2.n;
    const double pscale = rate * (c.m1 + c.m2);
    const double escale = rate * (c.m1 + c.m2 + m1.T + m2.T);
    CHECK(std::abs(r.mass1) < 1e-12 * rate);
    CHECK(std::abs(r.mass2) < 1e-12 * rate);
    CHECK(max_abs(r.momentum) < 1e-8 * pscale);
    CHECK(std::abs(r.energy) < 1e-8 * escale);
  }
}

TEST_CASE("per-species closures conserve at unequal densities too") {
  const VelocityGrid g = wide_grid(33);
  for (Variant v : {Variant::bgk, Variant::es_single, Variant::es_full_b}) {
    MixtureState s = gapped_state(g);  // n1 = 1, n2 = 1.3
    MixtureConfig c;
    c.m2 = 1.5;
    c.gamma = 0.05;
    c.variant = v;
    if (uses_gaussian_self(v)) {
      c.mu1 = 0.3;
      c.mu2 = -0.2;
    }
    const InvariantRates r = collision_invariants_residual(s, c);
    const double rate = s.moments1().n * s.moments2().n * frequencies(c).nu12;
    CHECK(std::abs(r.mass1) < 1e-12 * rate);
    CHECK(std::abs(r.mass2) < 1e-12 * rate);
    CHECK(max_abs(r.momentum) < 1e-8 * rate * (c.m1 + c.m2));
    CHECK(std::abs(r.energy) < 1e-8 * rate * (c.m1 + c.m2 + 3.0));
  }
}

TEST_CASE("variant A falls back cleanly when no admissible mu21 exists") {
  const VelocityGrid g = wide_grid(17);
  GridField f1 = build_maxwellian(1.380176, Vec3{0.2, 0, 0}, 1.0, 1.0, g, true);
  GridField f2 = build_maxwellian(1.559626, Vec3{-0.2, 0, 0}, 1.4, 1.0, g, true);
  MixtureState s(g, 1.0, 1.0, std::move(f1), std::move(f2));
  MixtureConfig c;
  c.variant = Variant::es_full_a;
  c.nu12 = 0.424635;
  c.eps = 0.563748;
  c.beta1 = 2.718354;
  c.beta2 = 2.995205;
  c.alpha = 0.765573;
  c.mu1 = -0.131194;
  c.mu2 = 0.089893;
  CHECK_THROWS_AS((void)s.targets(c), NoAdmissibleMu21);
}

TEST_CASE("state construction validates the fields") {
  const VelocityGrid g = build_grid(3.0, 9);
  GridField good(g.node_count(), 0.1), bad(10, 0.1), zero(g.node_count(), 0.0);
  CHECK_THROWS_AS(MixtureState(g, 1.0, 1.0, bad, good), LengthMismatch);
  CHECK_THROWS_AS(MixtureState(g, 1.0, 1.0, zero, good), VacuumState);
}

TEST_CASE("deterministic evaluation is bitwise stable") {
  const VelocityGrid g = wide_grid(21);
  MixtureState s = gapped_state(g, 1.0, 1.5, kernels::Reduce::deterministic);
  MixtureConfig c;
  c.m2 = 1.5;
  c.variant = Variant::es_full_b;
  c.mu1 = 0.4;
  c.mu2 = -0.3;
  const EvalOptions opts{true, true};
  const auto [a1, a2] = rhs(s, c, frequencies(c), opts);
  const auto [b1, b2] = rhs(s, c, frequencies(c), opts);
  CHECK(std::equal(a1.begin(), a1.end(), b1.begin()));
  CHECK(std::equal(a2.begin(), a2.end(), b2.begin()));
}
