// Timings of the hot kernels, serial paths against the OpenMP ones.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "mixkin/closures.hpp"
#include "mixkin/collision.hpp"
#include "mixkin/kernels.hpp"
#include "mixkin/solver.hpp"

namespace {

volatile double g_sink = 0.0;  // keeps results observable

template <class F>
double best_seconds(int reps, F&& body) {
  using clock = std::chrono::steady_clock;
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    body();
    const auto t1 = clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial, double parallel) {
  std::printf("%-22s %10.3f ms %10.3f ms %8.2fx\n", name.c_str(), serial * 1e3,
              parallel * 1e3, parallel > 0.0 ? serial / parallel : 0.0);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel timings: serial reference vs OpenMP"};
  int points = 49;
  int reps = 5;
  app.add_option("--points", points, "velocity nodes per axis (odd)");
  app.add_option("--reps", reps, "repetitions; the best time is kept");
  CLI11_PARSE(app, argc, argv);

  using namespace mixkin;
  const VelocityGrid g = build_grid(8.0, points);
  const std::size_t nodes = g.node_count();

#ifdef _OPENMP
  std::printf("grid %d^3 (%zu nodes), %d threads\n\n", g.n, nodes, omp_get_max_threads());
#else
  std::printf("grid %d^3 (%zu nodes), OpenMP off\n\n", g.n, nodes);
#endif
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const Vec3 u{0.4, -0.2, 0.1};
  const SymTensor3 tau{1.3, 1.0, 0.8, 0.15, -0.1, 0.05};
  GridField f(nodes), h(nodes);

  report("maxwellian sample",
         best_seconds(reps, [&] { kernels::sample_maxwellian(g, 1.0, u, 1.2, 1.0, f, false); }),
         best_seconds(reps, [&] { kernels::sample_maxwellian(g, 1.0, u, 1.2, 1.0, f, true); }));
  report("gaussian sample",
         best_seconds(reps, [&] { kernels::sample_gaussian(g, 1.0, u, tau, 1.0, h, false); }),
         best_seconds(reps, [&] { kernels::sample_gaussian(g, 1.0, u, tau, 1.0, h, true); }));
  report("integrate",
         best_seconds(reps, [&] { g_sink = kernels::integrate(g, f, kernels::Reduce::deterministic); }),
         best_seconds(reps, [&] { g_sink = kernels::integrate(g, f, kernels::Reduce::parallel); }));
  report("moment sums",
         best_seconds(reps, [&] { g_sink = kernels::moment_sums(g, f, kernels::Reduce::deterministic).sxx; }),
         best_seconds(reps, [&] { g_sink = kernels::moment_sums(g, f, kernels::Reduce::parallel).sxx; }));
  report("entropy",
         best_seconds(reps, [&] { g_sink = kernels::entropy_sum(g, f, kernels::Reduce::deterministic); }),
         best_seconds(reps, [&] { g_sink = kernels::entropy_sum(g, f, kernels::Reduce::parallel); }));

  MixtureConfig c;
  c.m2 = 1.5;
  c.variant = Variant::es_full_b;
  c.mu1 = 0.3;
  c.mu2 = -0.2;
  GridField f2(nodes);
  kernels::sample_maxwellian(g, 1.3, Vec3{-0.3, 0.1, 0.0}, 1.8, c.m2, f2, true);
  MixtureState serial_state(g, c.m1, c.m2, f, f2, kernels::Reduce::deterministic);
  MixtureState parallel_state(g, c.m1, c.m2, f, f2, kernels::Reduce::parallel);
  const double dt =
      0.5 / stability_rate(c, serial_state.moments1().n, serial_state.moments2().n);

  const EvalOptions det_opts{true, true};
  const EvalOptions par_opts{false, true};
  report("relaxation rhs",
         best_seconds(reps, [&] { g_sink = rhs(serial_state, c, det_opts).first[0]; }),
         best_seconds(reps, [&] { g_sink = rhs(parallel_state, c, par_opts).first[0]; }));
  report("rk4 step",
         best_seconds(reps,
                      [&] {
                        MixtureState s(g, c.m1, c.m2, serial_state.f1(), serial_state.f2(),
                                       kernels::Reduce::deterministic);
                        step_homogeneous(s, c, dt, 0.9, det_opts);
                        g_sink = s.f1()[0];
                      }),
         best_seconds(reps, [&] {
           MixtureState s(g, c.m1, c.m2, parallel_state.f1(), parallel_state.f2(),
                          kernels::Reduce::parallel);
           step_homogeneous(s, c, dt, 0.9, par_opts);
           g_sink = s.f1()[0];
         }));
  return 0;
}
