#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mixkin/collision.hpp"
#include "mixkin/diagnostics.hpp"

namespace mixkin {

// Fixed-step RK4 relaxation of a space-homogeneous state.
struct HomogeneousRun {
  MixtureConfig config;
  double dt = 0.0;       // fixed step; must satisfy the stability bound
  double t_end = 1.0;
  double cadence = 0.1;  // spacing of diagnostics records
  double stability_factor = 0.9;
  EvalOptions opts;
};

// Fastest relaxation rate either species sees; steps must keep
// dt * rate <= stability_factor.
double stability_rate(const MixtureConfig& c, double n1, double n2);

// Distributions may dip this far below zero (relative to the species peak)
// before a step is rejected.
inline constexpr double kNegativityTol = 1e-13;

// One RK4 step in place. Throws StepRejected (carrying `time_now`) when the
// result is unacceptably negative, and Error when dt violates the bound.
void step_homogeneous(MixtureState& s, const MixtureConfig& c, double dt,
                      double stability_factor = 0.9, const EvalOptions& opts = {},
                      double time_now = 0.0);

// Called for every emitted record; `index` counts records from zero. Used by
// the CLI to write field dumps at marks.
using RecordHook = std::function<void(std::size_t index, const DiagnosticsRecord& rec)>;

// Steps to t_end, recording every `cadence`. The state is advanced in place;
// the first record is the initial condition.
std::vector<DiagnosticsRecord> run_homogeneous(MixtureState& s, const HomogeneousRun& run,
                                               const RecordHook& hook = {});

// ---- 1-D transport with periodic cells ----

// Each spatial cell carries full velocity distributions of both species,
// stored cell-major.
class TransportState {
public:
  TransportState(VelocityGrid grid, double mass1, double mass2, int nx, double length);

  const VelocityGrid& grid() const { return grid_; }
  double mass1() const { return mass1_; }
  double mass2() const { return mass2_; }
  int nx() const { return nx_; }
  double dx() const { return dx_; }
  double length() const { return length_; }

  std::span<double> f1(int cell);
  std::span<double> f2(int cell);
  std::span<const double> f1(int cell) const;
  std::span<const double> f2(int cell) const;

private:
  VelocityGrid grid_;
  double mass1_, mass2_;
  int nx_;
  double length_, dx_;
  std::vector<double> f1_, f2_;
};

struct Transport1DRun {
  MixtureConfig config;
  double dt = 0.0;   // 0 = choose from the advection and relaxation bounds
  double t_end = 1.0;
  double cadence = 0.1;
  double cfl = 0.9;  // advection number of the fastest velocity node
  double stability_factor = 0.9;
  EvalOptions opts;
};

// Strang splitting: half-step upwind advection, full relaxation step per
// cell, half-step advection. Periodic in x. Cells run in parallel in the
// relaxation substep; the per-cell kernels then run serially.
void step_transport_1d(TransportState& s, const MixtureConfig& c, double dt,
                       const EvalOptions& opts = {}, double time_now = 0.0);

// Records aggregate over space: totals are integrals dx, per-species n/u/T
// are density-weighted means, gaps and anisotropies are maxima over cells,
// the entropy pair integrates cell entropies, lemma2_slack is the minimum.
std::vector<DiagnosticsRecord> run_transport_1d(TransportState& s, const Transport1DRun& run,
                                                const RecordHook& hook = {});

} // namespace mixkin
