#include "mixkin/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixkin/errors.hpp"

namespace mixkin {

Moments compute_moments(std::span<const double> f, const VelocityGrid& g, double mass,
                        kernels::Reduce mode) {
  const kernels::MomentSums s = kernels::moment_sums(g, f, mode);
  if (!(s.mass >= kVacuumDensity)) {
    throw VacuumState("density " + std::to_string(s.mass) + " is below the vacuum threshold");
  }
  Moments m;
  m.n = s.mass;
  m.u = {s.mx / s.mass, s.my / s.mass, s.mz / s.mass};
  // Central second moments via raw sums: sum f (v-u)(v-u) = s_vv - (s_v s_v)/n.
  m.P.xx = mass * (s.sxx - s.mx * s.mx / s.mass);
  m.P.yy = mass * (s.syy - s.my * s.my / s.mass);
  m.P.zz = mass * (s.szz - s.mz * s.mz / s.mass);
  m.P.xy = mass * (s.sxy - s.mx * s.my / s.mass);
  m.P.xz = mass * (s.sxz - s.mx * s.mz / s.mass);
  m.P.yz = mass * (s.syz - s.my * s.mz / s.mass);
  m.T = m.P.trace() / (3.0 * m.n);
  return m;
}

MixtureTotals mixture_invariants(const Moments& m1, const Moments& m2, double mass1,
                                 double mass2) {
  MixtureTotals t;
  t.momentum = mass1 * m1.n * m1.u + mass2 * m2.n * m2.u;
  const double e1 = 0.5 * mass1 * m1.n * norm2(m1.u) + 1.5 * m1.n * m1.T;
  const double e2 = 0.5 * mass2 * m2.n * norm2(m2.u) + 1.5 * m2.n * m2.T;
  t.energy = e1 + e2;
  return t;
}

double auto_extent(std::span<const Moments> species, std::span<const double> masses,
                   double safety) {
  double v = 0.0;
  for (std::size_t k = 0; k < species.size(); ++k) {
    const Moments& m = species[k];
    const double reach = max_abs(m.u) + safety * std::sqrt(m.T / masses[k]);
    v = std::max(v, reach);
  }
  return v;
}

} // namespace mixkin
