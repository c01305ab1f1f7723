#include "mixkin/diagnostics.hpp"

#include <cmath>

#include "mixkin/closures.hpp"
#include "mixkin/errors.hpp"

namespace mixkin {

namespace {

double anisotropy(const Moments& m) {
  const double inv = 1.0 / (m.n * m.T);
  const SymTensor3 dev = inv * m.P - SymTensor3::identity();
  return max_abs_entry(dev);
}

} // namespace

double entropy(std::span<const double> f1, std::span<const double> f2,
               const VelocityGrid& g, kernels::Reduce mode) {
  return kernels::entropy_sum(g, f1, mode) + kernels::entropy_sum(g, f2, mode);
}

double entropy_production_from_targets(const VelocityGrid& g, std::span<const double> f1,
                                       std::span<const double> f2, const TargetSet& ts,
                                       double n1, double n2, kernels::Reduce mode) {
  double s = 0.0;
  if (!ts.self1.empty()) {
    s += ts.freqs.nu11 * n1 * kernels::log_pairing_sum(g, f1, ts.self1, mode);
  }
  if (!ts.cross12.empty()) {
    s += ts.freqs.nu12 * n2 * kernels::log_pairing_sum(g, f1, ts.cross12, mode);
  }
  if (!ts.self2.empty()) {
    s += ts.freqs.nu22 * n2 * kernels::log_pairing_sum(g, f2, ts.self2, mode);
  }
  if (!ts.cross21.empty()) {
    s += ts.freqs.nu21 * n1 * kernels::log_pairing_sum(g, f2, ts.cross21, mode);
  }
  return s;
}

double entropy_production(const MixtureState& s, const MixtureConfig& c,
                          const EvalOptions& opts) {
  const TargetSet& ts = s.targets(c, opts);
  return entropy_production_from_targets(s.grid(), s.f1(), s.f2(), ts, s.moments1().n,
                                         s.moments2().n, reduce_mode(opts));
}

double lemma2_slack(const SymTensor3& tau12, const SymTensor3& tau21,
                    const SymTensor3& p1_over_n1, const SymTensor3& p2_over_n2,
                    double eps) {
  return eps * std::log(det(tau12)) + std::log(det(tau21)) -
         eps * std::log(det(p1_over_n1)) - std::log(det(p2_over_n2));
}

EquilibriumDistance equilibrium_distance(const MixtureState& s, const EvalOptions& opts) {
  const Moments& m1 = s.moments1();
  const Moments& m2 = s.moments2();
  EquilibriumDistance d;
  d.gap_u = std::sqrt(norm2(m1.u - m2.u));
  d.gap_t = std::abs(m1.T - m2.T);
  d.aniso1 = anisotropy(m1);
  d.aniso2 = anisotropy(m2);
  const kernels::Reduce mode = reduce_mode(opts);
  const GridField g1 =
      build_maxwellian(m1.n, m1.u, m1.T, s.mass1(), s.grid(), opts.mass_exact, mode);
  const GridField g2 =
      build_maxwellian(m2.n, m2.u, m2.T, s.mass2(), s.grid(), opts.mass_exact, mode);
  double peak1 = kernels::max_value(g1);
  double peak2 = kernels::max_value(g2);
  double worst1 = 0.0, worst2 = 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    worst1 = std::max(worst1, std::abs(s.f1()[i] - g1[i]));
    worst2 = std::max(worst2, std::abs(s.f2()[i] - g2[i]));
  }
  d.maxw_res1 = worst1 / peak1;
  d.maxw_res2 = worst2 / peak2;
  return d;
}

DiagnosticsRecord make_record(double time, const MixtureState& s, const MixtureConfig& c,
                              const EvalOptions& opts) {
  const Moments& m1 = s.moments1();
  const Moments& m2 = s.moments2();
  const kernels::Reduce mode = reduce_mode(opts);

  DiagnosticsRecord r;
  r.time = time;
  r.n1 = m1.n;
  r.u1 = m1.u;
  r.t1 = m1.T;
  r.p1_eigs = eigenvalues((1.0 / m1.n) * m1.P);
  r.n2 = m2.n;
  r.u2 = m2.u;
  r.t2 = m2.T;
  r.p2_eigs = eigenvalues((1.0 / m2.n) * m2.P);
  r.mass1 = m1.n;
  r.mass2 = m2.n;
  const MixtureTotals tot = mixture_invariants(m1, m2, s.mass1(), s.mass2());
  r.momentum = tot.momentum;
  r.energy = tot.energy;
  r.entropy = entropy(s.f1(), s.f2(), s.grid(), mode);

  const TargetSet& ts = s.targets(c, opts);
  r.entropy_production =
      entropy_production_from_targets(s.grid(), s.f1(), s.f2(), ts, m1.n, m2.n, mode);
  r.gap_u = std::sqrt(norm2(m1.u - m2.u));
  r.gap_t = std::abs(m1.T - m2.T);
  r.aniso1 = anisotropy(m1);
  r.aniso2 = anisotropy(m2);
  r.lemma2_slack = lemma2_slack(ts.tau12, ts.tau21, (1.0 / m1.n) * m1.P,
                                (1.0 / m2.n) * m2.P, c.eps);
  return r;
}

} // namespace mixkin
