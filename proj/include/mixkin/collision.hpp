#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>

#include "mixkin/closures.hpp"
#include "mixkin/kernels.hpp"
#include "mixkin/moments.hpp"
#include "mixkin/vgrid.hpp"

namespace mixkin {

// How right-hand sides and diagnostics are evaluated.
//   deterministic: fixed-order reductions, bitwise repeatable across thread
//                  counts (maps are always repeatable).
//   mass_exact:    rescale each sampled target so its discrete density equals
//                  the nominal one; keeps the collision operator conservative
//                  to rounding instead of to quadrature accuracy.
struct EvalOptions {
  bool deterministic = false;
  bool mass_exact = true;

  bool operator==(const EvalOptions&) const = default;
};

inline kernels::Reduce reduce_mode(const EvalOptions& o) {
  return o.deterministic ? kernels::Reduce::deterministic : kernels::Reduce::parallel;
}

// The four relaxation targets at one state, plus everything worth reporting
// about how they were built. A target field is left empty when its rate is
// zero and it cannot contribute.
struct TargetSet {
  GridField self1, self2;
  GridField cross12, cross21;
  SymTensor3 tau1, tau2;    // self tensors (T I for Maxwellian targets)
  SymTensor3 tau12, tau21;  // interspecies tensors (isotropic for scalar ones)
  Vec3 u12, u21;
  double t12 = 0.0, t21 = 0.0;  // scalar interspecies temperatures
  double du2 = 0.0;             // |u1 - u2|^2 shared by all of the above
  double mu12 = 0.0, mu21 = 0.0;  // coefficients used (NaN outside variant A)
  std::optional<Mu21Solution> mu21_solution;
  Frequencies freqs;
};

// Build the targets for given moments. `freqs` is taken explicitly so tests
// and the transport solver can zero out individual channels.
TargetSet build_targets(const VelocityGrid& g, const Moments& mom1, const Moments& mom2,
                        double mass1, double mass2, const MixtureConfig& c,
                        const Frequencies& freqs, const EvalOptions& opts = {},
                        bool parallel_maps = true);

// out_k = nu_kk n_k (self_k - f_k) + nu_kj n_j (cross_kj - f_k)
void apply_relaxation(const TargetSet& ts, std::span<const double> f1,
                      std::span<const double> f2, double n1, double n2,
                      std::span<double> out1, std::span<double> out2,
                      bool parallel = true);

// Two distribution fields on a shared grid with eagerly computed moments and
// a lazily cached TargetSet. Reading (f, moments, targets) concurrently is
// safe as long as every reader asks for the same config/options; set_fields
// requires exclusive access and invalidates the cache.
class MixtureState {
public:
  MixtureState(VelocityGrid grid, double mass1, double mass2, GridField f1, GridField f2,
               kernels::Reduce mode = kernels::Reduce::parallel);

  const VelocityGrid& grid() const { return grid_; }
  double mass1() const { return mass1_; }
  double mass2() const { return mass2_; }
  const GridField& f1() const { return f1_; }
  const GridField& f2() const { return f2_; }
  const Moments& moments1() const { return mom1_; }
  const Moments& moments2() const { return mom2_; }
  kernels::Reduce reduce() const { return mode_; }
  std::uint64_t version() const { return version_; }

  void set_fields(GridField f1, GridField f2);

  // Targets for the current fields; rebuilt when the fields, the config or
  // the options change, otherwise served from the cache.
  const TargetSet& targets(const MixtureConfig& c, const EvalOptions& opts = {}) const;

private:
  VelocityGrid grid_;
  double mass1_, mass2_;
  GridField f1_, f2_;
  Moments mom1_, mom2_;
  kernels::Reduce mode_;
  std::uint64_t version_ = 0;

  struct Cache {
    std::uint64_t version = 0;
    MixtureConfig config;
    EvalOptions opts;
    TargetSet targets;
  };
  mutable std::unique_ptr<std::mutex> cache_lock_ = std::make_unique<std::mutex>();
  mutable std::optional<Cache> cache_;
};

// Relaxation right-hand sides for both species.
std::pair<GridField, GridField> rhs(const MixtureState& s, const MixtureConfig& c,
                                    const EvalOptions& opts = {});

// Same, with explicit rates (bypasses the target cache).
std::pair<GridField, GridField> rhs(const MixtureState& s, const MixtureConfig& c,
                                    const Frequencies& freqs, const EvalOptions& opts = {});

// Time derivatives of the conserved totals produced by the right-hand side;
// all of them should vanish to rounding.
struct InvariantRates {
  double mass1 = 0.0, mass2 = 0.0;
  Vec3 momentum;
  double energy = 0.0;
};

InvariantRates collision_invariants_residual(const MixtureState& s, const MixtureConfig& c,
                                             const EvalOptions& opts = {});

} // namespace mixkin
