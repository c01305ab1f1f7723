#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mixkin/errors.hpp"
#include "mixkin/kernels.hpp"
#include "mixkin/vgrid.hpp"

using namespace mixkin;

TEST_CASE("grid construction rejects bad parameters") {
  CHECK_THROWS_AS((void)build_grid(0.0, 33), BadResolution);
  CHECK_THROWS_AS((void)build_grid(-1.0, 33), BadResolution);
  CHECK_THROWS_AS((void)build_grid(5.0, 7), BadResolution);   // too coarse
  CHECK_THROWS_AS((void)build_grid(5.0, 32), BadResolution);  // even
  CHECK_NOTHROW((void)build_grid(5.0, 9));
}

TEST_CASE("axis nodes are uniform and exactly symmetric") {
  const VelocityGrid g = build_grid(6.0, 13);
  CHECK(g.h == doctest::Approx(1.0));
  CHECK(g.axis.size() == 13);
  CHECK(g.axis.front() == -6.0);
  CHECK(g.axis.back() == 6.0);
  CHECK(g.axis[g.mid()] == 0.0);  // zero is a node, exactly

  const VelocityGrid f = build_grid(8.0, 33);
  CHECK(f.axis[f.mid()] == 0.0);
  for (int i = 0; i < f.n; ++i) {
    CHECK(f.axis[i] == -f.axis[f.n - 1 - i]);  // bitwise antisymmetry
  }
}

TEST_CASE("quadrature weights close the trapezoid") {
  const VelocityGrid g = build_grid(4.0, 17);
  CHECK(g.axis_w.front() == 0.5 * g.h);
  CHECK(g.axis_w.back() == 0.5 * g.h);
  CHECK(g.axis_w[5] == g.h);
  double sum = 0.0;
  for (double w : g.axis_w) sum += w;
  CHECK(sum == doctest::Approx(2.0 * g.extent).epsilon(1e-14));
}

TEST_CASE("a constant integrates to the cube volume") {
  const VelocityGrid g = build_grid(1.0, 9);
  const GridField ones(g.node_count(), 1.0);
  CHECK(kernels::integrate(g, ones, kernels::Reduce::deterministic) ==
        doctest::Approx(8.0).epsilon(1e-14));
  CHECK(kernels::integrate(g, ones, kernels::Reduce::parallel) ==
        doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("odd monomials vanish in the symmetric-pair reduction") {
  const VelocityGrid g = build_grid(3.0, 15);
  GridField vx(g.node_count()), vx3(g.node_count()), vxyy(g.node_count());
  for (int iz = 0; iz < g.n; ++iz) {
    for (int iy = 0; iy < g.n; ++iy) {
      for (int ix = 0; ix < g.n; ++ix) {
        const std::size_t i = g.index(ix, iy, iz);
        const double x = g.axis[ix], y = g.axis[iy];
        vx[i] = x;
        vx3[i] = x * x * x;
        vxyy[i] = x * y * y;
      }
    }
  }
  // exact zeros: the deterministic order cancels mirror nodes pairwise
  CHECK(kernels::integrate(g, vx, kernels::Reduce::deterministic) == 0.0);
  CHECK(kernels::integrate(g, vx3, kernels::Reduce::deterministic) == 0.0);
  CHECK(kernels::integrate(g, vxyy, kernels::Reduce::deterministic) == 0.0);
  // the thread-friendly order only promises rounding-level zeros
  CHECK(std::abs(kernels::integrate(g, vx, kernels::Reduce::parallel)) < 1e-12);
}

TEST_CASE("a Maxwellian integrates to its density") {
  const VelocityGrid g = build_grid(6.0, 25);
  GridField f(g.node_count());
  kernels::sample_maxwellian(g, 1.0, Vec3{}, 1.0, 1.0, f);
  const double mass = kernels::integrate(g, f, kernels::Reduce::deterministic);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("node indexing is x-fastest") {
  const VelocityGrid g = build_grid(2.0, 9);
  CHECK(g.index(0, 0, 0) == 0);
  CHECK(g.index(1, 0, 0) == 1);
  CHECK(g.index(0, 1, 0) == 9);
  CHECK(g.index(0, 0, 1) == 81);
  CHECK(g.index(8, 8, 8) == g.node_count() - 1);
}
