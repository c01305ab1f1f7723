#pragma once

#include <span>

#include "mixkin/kernels.hpp"
#include "mixkin/sym3.hpp"
#include "mixkin/vgrid.hpp"

namespace mixkin {

// Hydrodynamic fields of one species: number density, mean velocity,
// temperature and the pressure tensor P = m * integral of f (v-u)(x)(v-u).
// T is defined as trace(P) / (3 n), so that identity holds by construction.
struct Moments {
  double n = 0.0;
  Vec3 u;
  double T = 0.0;
  SymTensor3 P;
};

// Densities below this are treated as vacuum; moments would be noise.
inline constexpr double kVacuumDensity = 1e-14;

// One pass over the field. Throws VacuumState when the density falls under
// kVacuumDensity and LengthMismatch when the field does not fit the grid.
Moments compute_moments(std::span<const double> f, const VelocityGrid& g, double mass,
                        kernels::Reduce mode = kernels::Reduce::parallel);

// Totals the collision operator must conserve.
struct MixtureTotals {
  Vec3 momentum;
  double energy = 0.0;
};

// momentum = m1 n1 u1 + m2 n2 u2; energy adds internal 3/2 n T to the kinetic
// part per species.
MixtureTotals mixture_invariants(const Moments& m1, const Moments& m2, double mass1,
                                 double mass2);

// Grid half-width covering every species: max over species of
// max_c |u_c| + safety * sqrt(T / m).
double auto_extent(std::span<const Moments> species, std::span<const double> masses,
                   double safety = 7.0);

} // namespace mixkin
