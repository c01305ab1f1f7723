#include "mixkin/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mixkin/errors.hpp"

namespace mixkin {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct RhsPair {
  GridField r1, r2;
};

// moments -> targets -> relaxation, for raw stage or cell fields.
RhsPair rhs_eval(const VelocityGrid& g, std::span<const double> f1,
                 std::span<const double> f2, double m1, double m2, const MixtureConfig& c,
                 const Frequencies& fr, const EvalOptions& opts, bool parallel) {
  const kernels::Reduce mode = reduce_mode(opts);
  const Moments mom1 = compute_moments(f1, g, m1, mode);
  const Moments mom2 = compute_moments(f2, g, m2, mode);
  const TargetSet ts = build_targets(g, mom1, mom2, m1, m2, c, fr, opts, parallel);
  RhsPair out;
  out.r1.resize(g.node_count());
  out.r2.resize(g.node_count());
  apply_relaxation(ts, f1, f2, mom1.n, mom2.n, out.r1, out.r2, parallel);
  return out;
}

void check_positive(std::span<const double> f, const char* species, double time_now) {
  const double lo = kernels::min_value(f);
  if (lo >= 0.0) return;
  const double peak = kernels::max_value(f);
  if (lo < -kNegativityTol * peak) {
    throw StepRejected(time_now, "step at t = " + fmt(time_now) + " drove species " +
                                     species + " down to " + fmt(lo) +
                                     " (peak " + fmt(peak) + "); rejected");
  }
}

// Classic RK4 for df/dt = relaxation(f). `stage1` may carry precomputed
// targets for the initial state (with densities n1, n2); the other stages
// always rebuild from their own moments.
void rk4_fields(const VelocityGrid& g, std::span<const double> f1,
                std::span<const double> f2, const TargetSet* stage1, double n1, double n2,
                double m1, double m2, const MixtureConfig& c, const Frequencies& fr,
                double dt, const EvalOptions& opts, bool parallel, GridField& out1,
                GridField& out2, double time_now) {
  const std::size_t nc = g.node_count();
  RhsPair k1;
  if (stage1) {
    k1.r1.resize(nc);
    k1.r2.resize(nc);
    apply_relaxation(*stage1, f1, f2, n1, n2, k1.r1, k1.r2, parallel);
  } else {
    k1 = rhs_eval(g, f1, f2, m1, m2, c, fr, opts, parallel);
  }
  GridField a1(nc), a2(nc);
  kernels::axpy(f1, 0.5 * dt, k1.r1, a1, parallel);
  kernels::axpy(f2, 0.5 * dt, k1.r2, a2, parallel);
  const RhsPair k2 = rhs_eval(g, a1, a2, m1, m2, c, fr, opts, parallel);
  kernels::axpy(f1, 0.5 * dt, k2.r1, a1, parallel);
  kernels::axpy(f2, 0.5 * dt, k2.r2, a2, parallel);
  const RhsPair k3 = rhs_eval(g, a1, a2, m1, m2, c, fr, opts, parallel);
  kernels::axpy(f1, dt, k3.r1, a1, parallel);
  kernels::axpy(f2, dt, k3.r2, a2, parallel);
  const RhsPair k4 = rhs_eval(g, a1, a2, m1, m2, c, fr, opts, parallel);
  out1.resize(nc);
  out2.resize(nc);
  kernels::rk4_combine(f1, k1.r1, k2.r1, k3.r1, k4.r1, dt, out1, parallel);
  kernels::rk4_combine(f2, k1.r2, k2.r2, k3.r2, k4.r2, dt, out2, parallel);
  check_positive(out1, "1", time_now);
  check_positive(out2, "2", time_now);
}

} // namespace

double stability_rate(const MixtureConfig& c, double n1, double n2) {
  const Frequencies f = frequencies(c);
  return std::max(f.nu11 * n1 + f.nu12 * n2, f.nu22 * n2 + f.nu21 * n1);
}

void step_homogeneous(MixtureState& s, const MixtureConfig& c, double dt,
                      double stability_factor, const EvalOptions& opts, double time_now) {
  if (!(dt > 0.0)) throw Error("time step must be positive, got " + fmt(dt));
  const double rate = stability_rate(c, s.moments1().n, s.moments2().n);
  if (dt * rate > stability_factor * (1.0 + 1e-12)) {
    throw Error("dt = " + fmt(dt) + " violates the stability bound " +
                fmt(stability_factor / rate) + " (rate " + fmt(rate) + ")");
  }
  const TargetSet& ts = s.targets(c, opts);
  GridField out1, out2;
  rk4_fields(s.grid(), s.f1(), s.f2(), &ts, s.moments1().n, s.moments2().n, s.mass1(),
             s.mass2(), c, ts.freqs, dt, opts, /*parallel=*/true, out1, out2, time_now);
  s.set_fields(std::move(out1), std::move(out2));
}

std::vector<DiagnosticsRecord> run_homogeneous(MixtureState& s, const HomogeneousRun& run,
                                               const RecordHook& hook) {
  if (!(run.dt > 0.0)) throw Error("run.dt must be positive");
  if (!(run.cadence > 0.0)) throw Error("run.cadence must be positive");
  if (!(run.t_end > 0.0)) throw Error("run.t_end must be positive");
  std::vector<DiagnosticsRecord> recs;
  auto emit = [&](double t) {
    recs.push_back(make_record(t, s, run.config, run.opts));
    if (hook) hook(recs.size() - 1, recs.back());
  };
  emit(0.0);
  const double tiny = 1e-12 * std::max(run.t_end, run.dt);
  double t = 0.0;
  long mark = 1;
  while (t < run.t_end - tiny) {
    const double step = std::min(run.dt, run.t_end - t);
    step_homogeneous(s, run.config, step, run.stability_factor, run.opts, t);
    t += step;
    if (t >= mark * run.cadence - tiny || t >= run.t_end - tiny) {
      emit(t);
      mark = static_cast<long>(std::floor((t + tiny) / run.cadence)) + 1;
    }
  }
  return recs;
}

TransportState::TransportState(VelocityGrid grid, double mass1, double mass2, int nx,
                               double length)
    : grid_(std::move(grid)), mass1_(mass1), mass2_(mass2), nx_(nx), length_(length) {
  if (nx_ < 2) throw BadResolution("transport needs at least 2 cells, got " + fmt(nx));
  if (!(length_ > 0.0)) throw BadResolution("domain length must be positive");
  dx_ = length_ / nx_;
  f1_.assign(static_cast<std::size_t>(nx_) * grid_.node_count(), 0.0);
  f2_.assign(static_cast<std::size_t>(nx_) * grid_.node_count(), 0.0);
}

std::span<double> TransportState::f1(int cell) {
  return {f1_.data() + static_cast<std::size_t>(cell) * grid_.node_count(),
          grid_.node_count()};
}
std::span<double> TransportState::f2(int cell) {
  return {f2_.data() + static_cast<std::size_t>(cell) * grid_.node_count(),
          grid_.node_count()};
}
std::span<const double> TransportState::f1(int cell) const {
  return {f1_.data() + static_cast<std::size_t>(cell) * grid_.node_count(),
          grid_.node_count()};
}
std::span<const double> TransportState::f2(int cell) const {
  return {f2_.data() + static_cast<std::size_t>(cell) * grid_.node_count(),
          grid_.node_count()};
}

namespace {

// First-order upwind sweep of every velocity column through the periodic
// cells. Conservative flux form; exact translation at unit CFL.
void advect(TransportState& s, double dt) {
  const VelocityGrid& g = s.grid();
  const int nx = s.nx();
  const int nn = g.n;
  const double r = dt / s.dx();
  const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(g.node_count());
  for (int species = 0; species < 2; ++species) {
    auto field = [&](int cell) { return species == 0 ? s.f1(cell) : s.f2(cell); };
#pragma omp parallel
    {
      std::vector<double> col(nx);
#pragma omp for
      for (std::ptrdiff_t node = 0; node < nc; ++node) {
        const int ix = static_cast<int>(node % nn);
        const double v = g.axis[ix];
        if (v == 0.0) continue;
        const double c = v * r;
        for (int j = 0; j < nx; ++j) col[j] = field(j)[node];
        if (v > 0.0) {
          for (int j = 0; j < nx; ++j) {
            const double up = col[(j + nx - 1) % nx];
            field(j)[node] = col[j] - c * (col[j] - up);
          }
        } else {
          for (int j = 0; j < nx; ++j) {
            const double down = col[(j + 1) % nx];
            field(j)[node] = col[j] - c * (down - col[j]);
          }
        }
      }
    }
  }
}

void collide_cells(TransportState& s, const MixtureConfig& c, double dt,
                   const EvalOptions& opts, double time_now) {
  const Frequencies fr = frequencies(c);
  if (fr.nu11 == 0.0 && fr.nu12 == 0.0 && fr.nu21 == 0.0 && fr.nu22 == 0.0) {
    return;  // pure streaming
  }
  std::atomic<bool> failed{false};
  bool rejected = false;
  double rtime = time_now;
  std::string msg;
#pragma omp parallel for schedule(dynamic)
  for (int cell = 0; cell < s.nx(); ++cell) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      std::span<double> f1 = s.f1(cell);
      std::span<double> f2 = s.f2(cell);
      GridField out1, out2;
      // Cells are the parallel dimension here; the per-cell kernels stay
      // serial so nothing is oversubscribed.
      rk4_fields(s.grid(), f1, f2, nullptr, 0.0, 0.0, s.mass1(), s.mass2(), c, fr, dt,
                 opts, /*parallel=*/false, out1, out2, time_now);
      std::copy(out1.begin(), out1.end(), f1.begin());
      std::copy(out2.begin(), out2.end(), f2.begin());
    } catch (const StepRejected& e) {
#pragma omp critical
      if (!failed.exchange(true)) {
        rejected = true;
        rtime = e.time();
        msg = e.what();
      }
    } catch (const std::exception& e) {
#pragma omp critical
      if (!failed.exchange(true)) msg = e.what();
    }
  }
  if (failed.load()) {
    if (rejected) throw StepRejected(rtime, msg);
    throw Error(msg);
  }
}

DiagnosticsRecord transport_record(double t, const TransportState& s,
                                   const MixtureConfig& c, const EvalOptions& opts) {
  const VelocityGrid& g = s.grid();
  const kernels::Reduce mode = reduce_mode(opts);
  const Frequencies fr = frequencies(c);
  const bool collisional =
      fr.nu11 != 0.0 || fr.nu12 != 0.0 || fr.nu21 != 0.0 || fr.nu22 != 0.0;
  const double dxw = s.dx();

  DiagnosticsRecord r;
  r.time = t;
  Vec3 u1w, u2w, mom;
  SymTensor3 p1w, p2w;
  double t1w = 0, t2w = 0, energy = 0, hsum = 0, ssum = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.nx(); ++j) {
    const auto f1 = s.f1(j);
    const auto f2 = s.f2(j);
    const Moments m1 = compute_moments(f1, g, s.mass1(), mode);
    const Moments m2 = compute_moments(f2, g, s.mass2(), mode);
    r.mass1 += dxw * m1.n;
    r.mass2 += dxw * m2.n;
    u1w = u1w + (dxw * m1.n) * m1.u;
    u2w = u2w + (dxw * m2.n) * m2.u;
    t1w += dxw * m1.n * m1.T;
    t2w += dxw * m2.n * m2.T;
    p1w = p1w + dxw * m1.P;
    p2w = p2w + dxw * m2.P;
    const MixtureTotals tot = mixture_invariants(m1, m2, s.mass1(), s.mass2());
    mom = mom + dxw * tot.momentum;
    energy += dxw * tot.energy;
    hsum += dxw * entropy(f1, f2, g, mode);
    r.gap_u = std::max(r.gap_u, std::sqrt(norm2(m1.u - m2.u)));
    r.gap_t = std::max(r.gap_t, std::abs(m1.T - m2.T));
    const SymTensor3 dev1 = (1.0 / (m1.n * m1.T)) * m1.P - SymTensor3::identity();
    const SymTensor3 dev2 = (1.0 / (m2.n * m2.T)) * m2.P - SymTensor3::identity();
    r.aniso1 = std::max(r.aniso1, max_abs_entry(dev1));
    r.aniso2 = std::max(r.aniso2, max_abs_entry(dev2));
    if (collisional) {
      const TargetSet ts = build_targets(g, m1, m2, s.mass1(), s.mass2(), c, fr, opts);
      ssum += dxw * entropy_production_from_targets(g, f1, f2, ts, m1.n, m2.n, mode);
      slack = std::min(slack, lemma2_slack(ts.tau12, ts.tau21, (1.0 / m1.n) * m1.P,
                                           (1.0 / m2.n) * m2.P, c.eps));
    }
  }
  r.n1 = r.mass1 / s.length();
  r.n2 = r.mass2 / s.length();
  r.u1 = (1.0 / r.mass1) * u1w;
  r.u2 = (1.0 / r.mass2) * u2w;
  r.t1 = t1w / r.mass1;
  r.t2 = t2w / r.mass2;
  r.p1_eigs = eigenvalues((1.0 / r.mass1) * p1w);
  r.p2_eigs = eigenvalues((1.0 / r.mass2) * p2w);
  r.momentum = mom;
  r.energy = energy;
  r.entropy = hsum;
  r.entropy_production = ssum;
  r.lemma2_slack = collisional ? slack : 0.0;
  return r;
}

} // namespace

void step_transport_1d(TransportState& s, const MixtureConfig& c, double dt,
                       const EvalOptions& opts, double time_now) {
  if (!(dt > 0.0)) throw Error("time step must be positive, got " + fmt(dt));
  advect(s, 0.5 * dt);
  collide_cells(s, c, dt, opts, time_now);
  advect(s, 0.5 * dt);
}

std::vector<DiagnosticsRecord> run_transport_1d(TransportState& s, const Transport1DRun& run,
                                                const RecordHook& hook) {
  if (!(run.cadence > 0.0)) throw Error("run.cadence must be positive");
  if (!(run.t_end > 0.0)) throw Error("run.t_end must be positive");
  if (!(run.cfl > 0.0 && run.cfl <= 1.0)) throw Error("cfl must lie in (0, 1]");
  const VelocityGrid& g = s.grid();
  double n1max = 0.0, n2max = 0.0;
  for (int j = 0; j < s.nx(); ++j) {
    n1max = std::max(n1max, kernels::moment_sums(g, s.f1(j), reduce_mode(run.opts)).mass);
    n2max = std::max(n2max, kernels::moment_sums(g, s.f2(j), reduce_mode(run.opts)).mass);
  }
  const double rate = stability_rate(run.config, n1max, n2max);
  const double vmax = g.extent;
  double dt = run.dt;
  if (dt <= 0.0) {
    dt = run.cfl * s.dx() / vmax;
    if (rate > 0.0) dt = std::min(dt, run.stability_factor / rate);
  } else {
    if (dt * vmax / s.dx() > run.cfl * (1.0 + 1e-12)) {
      throw Error("dt = " + fmt(dt) + " violates the advection bound " +
                  fmt(run.cfl * s.dx() / vmax));
    }
    if (dt * rate > run.stability_factor * (1.0 + 1e-12)) {
      throw Error("dt = " + fmt(dt) + " violates the relaxation bound " +
                  fmt(run.stability_factor / rate));
    }
  }
  std::vector<DiagnosticsRecord> recs;
  auto emit = [&](double t) {
    recs.push_back(transport_record(t, s, run.config, run.opts));
    if (hook) hook(recs.size() - 1, recs.back());
  };
  emit(0.0);
  const double tiny = 1e-12 * std::max(run.t_end, dt);
  double t = 0.0;
  long mark = 1;
  while (t < run.t_end - tiny) {
    const double step = std::min(dt, run.t_end - t);
    step_transport_1d(s, run.config, step, run.opts, t);
    t += step;
    if (t >= mark * run.cadence - tiny || t >= run.t_end - tiny) {
      emit(t);
      mark = static_cast<long>(std::floor((t + tiny) / run.cadence)) + 1;
    }
  }
  return recs;
}

} // namespace mixkin
