#pragma once

#include <array>
#include <span>

#include "mixkin/collision.hpp"
#include "mixkin/moments.hpp"

namespace mixkin {

// Everything a time-series row reports about one state.
struct DiagnosticsRecord {
  double time = 0.0;
  double n1 = 0.0, t1 = 0.0;
  Vec3 u1;
  std::array<double, 3> p1_eigs = {0, 0, 0};  // eigenvalues of P1 / n1
  double n2 = 0.0, t2 = 0.0;
  Vec3 u2;
  std::array<double, 3> p2_eigs = {0, 0, 0};
  double mass1 = 0.0, mass2 = 0.0;
  Vec3 momentum;
  double energy = 0.0;
  double entropy = 0.0;             // H = integral of f1 ln f1 + f2 ln f2
  double entropy_production = 0.0;  // S, nonpositive when the model behaves
  double gap_u = 0.0;               // |u1 - u2|
  double gap_t = 0.0;               // |T1 - T2|
  double aniso1 = 0.0, aniso2 = 0.0;  // max |P/(nT) - I| entry
  double lemma2_slack = 0.0;
};

double entropy(std::span<const double> f1, std::span<const double> f2,
               const VelocityGrid& g, kernels::Reduce mode = kernels::Reduce::parallel);

// Frequency-weighted sum of integral ln f_k (target - f_k) over the four
// relaxation channels.
double entropy_production_from_targets(const VelocityGrid& g, std::span<const double> f1,
                                       std::span<const double> f2, const TargetSet& ts,
                                       double n1, double n2, kernels::Reduce mode);

double entropy_production(const MixtureState& s, const MixtureConfig& c,
                          const EvalOptions& opts = {});

// log(det tau12^eps * det tau21) - log(det (P1/n1)^eps * det (P2/n2));
// nonnegative for admissible parameters.
double lemma2_slack(const SymTensor3& tau12, const SymTensor3& tau21,
                    const SymTensor3& p1_over_n1, const SymTensor3& p2_over_n2,
                    double eps);

// How far a state is from the shared equilibrium.
struct EquilibriumDistance {
  double gap_u = 0.0, gap_t = 0.0;
  double aniso1 = 0.0, aniso2 = 0.0;
  // max-norm distance to the Maxwellian of each species' own moments,
  // relative to its peak
  double maxw_res1 = 0.0, maxw_res2 = 0.0;
};

EquilibriumDistance equilibrium_distance(const MixtureState& s, const EvalOptions& opts = {});

DiagnosticsRecord make_record(double time, const MixtureState& s, const MixtureConfig& c,
                              const EvalOptions& opts = {});

} // namespace mixkin
