#include "mixkin/collision.hpp"

#include <cmath>
#include <utility>

#include "mixkin/errors.hpp"

namespace mixkin {

TargetSet build_targets(const VelocityGrid& g, const Moments& mom1, const Moments& mom2,
                        double mass1, double mass2, const MixtureConfig& c,
                        const Frequencies& freqs, const EvalOptions& opts,
                        bool parallel_maps) {
  const kernels::Reduce mode = reduce_mode(opts);
  TargetSet ts;
  ts.freqs = freqs;
  ts.du2 = norm2(mom1.u - mom2.u);

  // Self targets.
  if (uses_gaussian_self(c.variant)) {
    ts.tau1 = tensor_single(mom1, c.mu1);
    ts.tau2 = tensor_single(mom2, c.mu2);
  } else {
    ts.tau1 = SymTensor3::isotropic(mom1.T);
    ts.tau2 = SymTensor3::isotropic(mom2.T);
  }
  if (freqs.nu11 * mom1.n != 0.0) {
    ts.self1 = build_gaussian(mom1.n, mom1.u, ts.tau1, mass1, g, opts.mass_exact, mode,
                              parallel_maps);
  }
  if (freqs.nu22 * mom2.n != 0.0) {
    ts.self2 = build_gaussian(mom2.n, mom2.u, ts.tau2, mass2, g, opts.mass_exact, mode,
                              parallel_maps);
  }

  // Interspecies targets.
  ts.u12 = interspecies_velocity_12(mom1.u, mom2.u, c.delta);
  ts.u21 = interspecies_velocity_21(mom1.u, mom2.u, c.delta, c.eps, c.m1, c.m2);
  ts.t12 = interspecies_temperature_12(mom1.T, mom2.T, c.alpha, c.gamma, ts.du2);
  ts.t21 = interspecies_temperature_21(mom1.T, mom2.T, c.alpha, c.gamma, c.delta, c.eps,
                                       c.m1, c.m2, ts.du2);
  const bool cross_needed = freqs.nu12 * mom2.n != 0.0 || freqs.nu21 * mom1.n != 0.0;
  if (uses_gaussian_cross(c.variant)) {
    if (c.variant == Variant::es_full_a && cross_needed) {
      MixtureConfig cc = c;
      if (!cc.mu12) cc.mu12 = mu12_restriction(c, mom1.n, mom2.n);
      if (!cc.mu21) {
        ts.mu21_solution = solve_mu21_roots(cc, mom1.n, mom2.n);
        cc.mu21 = ts.mu21_solution->selected;
      }
      const InterspeciesTensors it = tensor_interspecies_a(mom1, mom2, cc, ts.du2);
      ts.tau12 = it.t12;
      ts.tau21 = it.t21;
      ts.mu12 = it.mu12;
      ts.mu21 = it.mu21;
    } else if (c.variant == Variant::es_full_b) {
      const InterspeciesTensors it = tensor_interspecies_b(mom1, mom2, c, ts.du2);
      ts.tau12 = it.t12;
      ts.tau21 = it.t21;
      ts.mu12 = it.mu12;
      ts.mu21 = it.mu21;
    } else {
      // Variant A with no active cross channel: leave the scalar tensors.
      ts.tau12 = SymTensor3::isotropic(ts.t12);
      ts.tau21 = SymTensor3::isotropic(ts.t21);
      ts.mu12 = std::nan("");
      ts.mu21 = std::nan("");
    }
  } else {
    ts.tau12 = SymTensor3::isotropic(ts.t12);
    ts.tau21 = SymTensor3::isotropic(ts.t21);
    ts.mu12 = std::nan("");
    ts.mu21 = std::nan("");
  }
  if (freqs.nu12 * mom2.n != 0.0) {
    ts.cross12 = build_gaussian(mom1.n, ts.u12, ts.tau12, mass1, g, opts.mass_exact, mode,
                                parallel_maps);
  }
  if (freqs.nu21 * mom1.n != 0.0) {
    ts.cross21 = build_gaussian(mom2.n, ts.u21, ts.tau21, mass2, g, opts.mass_exact, mode,
                                parallel_maps);
  }
  return ts;
}

void apply_relaxation(const TargetSet& ts, std::span<const double> f1,
                      std::span<const double> f2, double n1, double n2,
                      std::span<double> out1, std::span<double> out2, bool parallel) {
  kernels::relax_combine(f1, ts.self1, ts.cross12, ts.freqs.nu11 * n1, ts.freqs.nu12 * n2,
                         out1, parallel);
  kernels::relax_combine(f2, ts.self2, ts.cross21, ts.freqs.nu22 * n2, ts.freqs.nu21 * n1,
                         out2, parallel);
}

MixtureState::MixtureState(VelocityGrid grid, double mass1, double mass2, GridField f1,
                           GridField f2, kernels::Reduce mode)
    : grid_(std::move(grid)),
      mass1_(mass1),
      mass2_(mass2),
      f1_(std::move(f1)),
      f2_(std::move(f2)),
      mode_(mode) {
  mom1_ = compute_moments(f1_, grid_, mass1_, mode_);
  mom2_ = compute_moments(f2_, grid_, mass2_, mode_);
}

void MixtureState::set_fields(GridField f1, GridField f2) {
  f1_ = std::move(f1);
  f2_ = std::move(f2);
  mom1_ = compute_moments(f1_, grid_, mass1_, mode_);
  mom2_ = compute_moments(f2_, grid_, mass2_, mode_);
  ++version_;
  std::lock_guard<std::mutex> hold(*cache_lock_);
  cache_.reset();
}

const TargetSet& MixtureState::targets(const MixtureConfig& c, const EvalOptions& opts) const {
  std::lock_guard<std::mutex> hold(*cache_lock_);
  if (cache_ && cache_->version == version_ && cache_->config == c && cache_->opts == opts) {
    return cache_->targets;
  }
  Cache fresh;
  fresh.version = version_;
  fresh.config = c;
  fresh.opts = opts;
  fresh.targets = build_targets(grid_, mom1_, mom2_, mass1_, mass2_, c, frequencies(c), opts);
  cache_ = std::move(fresh);
  return cache_->targets;
}

std::pair<GridField, GridField> rhs(const MixtureState& s, const MixtureConfig& c,
                                    const EvalOptions& opts) {
  const TargetSet& ts = s.targets(c, opts);
  std::pair<GridField, GridField> out;
  out.first.resize(s.grid().node_count());
  out.second.resize(s.grid().node_count());
  apply_relaxation(ts, s.f1(), s.f2(), s.moments1().n, s.moments2().n, out.first,
                   out.second);
  return out;
}

std::pair<GridField, GridField> rhs(const MixtureState& s, const MixtureConfig& c,
                                    const Frequencies& freqs, const EvalOptions& opts) {
  const TargetSet ts = build_targets(s.grid(), s.moments1(), s.moments2(), s.mass1(),
                                     s.mass2(), c, freqs, opts);
  std::pair<GridField, GridField> out;
  out.first.resize(s.grid().node_count());
  out.second.resize(s.grid().node_count());
  apply_relaxation(ts, s.f1(), s.f2(), s.moments1().n, s.moments2().n, out.first,
                   out.second);
  return out;
}

InvariantRates collision_invariants_residual(const MixtureState& s, const MixtureConfig& c,
                                             const EvalOptions& opts) {
  const auto [r1, r2] = rhs(s, c, opts);
  const kernels::Reduce mode = reduce_mode(opts);
  const kernels::MomentSums s1 = kernels::moment_sums(s.grid(), r1, mode);
  const kernels::MomentSums s2 = kernels::moment_sums(s.grid(), r2, mode);
  InvariantRates rates;
  rates.mass1 = s1.mass;
  rates.mass2 = s2.mass;
  rates.momentum = s.mass1() * Vec3{s1.mx, s1.my, s1.mz} + s.mass2() * Vec3{s2.mx, s2.my, s2.mz};
  rates.energy = 0.5 * s.mass1() * (s1.sxx + s1.syy + s1.szz) +
                 0.5 * s.mass2() * (s2.sxx + s2.syy + s2.szz);
  return rates;
}

} // namespace mixkin
