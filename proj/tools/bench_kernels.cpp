// Benchmark: OpenMP transform/advection kernels against the serial reference
// implementation, plus the full ETD step.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "snse/flow.hpp"
#include "snse/reference_kernels.hpp"

using namespace snse;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const int l_max = argc > 1 ? std::atoi(argv[1]) : 31;
  const int n_lat = (3 * (l_max + 1) + 1) / 2 + ((3 * (l_max + 1) + 1) % 2);
  const int n_lon = 3 * l_max + 1 + (3 * l_max + 1) % 2;
  std::printf("l_max %d, grid %dx%d, %d thread(s)\n", l_max, n_lat, n_lon, omp_get_max_threads());

  SphereGrid grid(n_lat, n_lon, l_max, true);
  const SpectralField f = random_field(l_max, 2, 42);
  const GridField vals = synthesize(f, grid);

  const double t_synth = time_of([&] { synthesize(f, grid); }, 50);
  const double t_synth_ref = time_of([&] { ref::synthesize(f, grid); }, 3);
  const double t_ana = time_of([&] { analyze(vals, grid, l_max, 2); }, 50);
  const double t_ana_ref = time_of([&] { ref::analyze(vals, grid, l_max, 2); }, 3);

  OperatorContext ctx{&grid, 2.0, 1.0, StokesSpectrum::stokes};
  const double t_adv = time_of([&] { self_advection(f, ctx); }, 30);

  ModelConfig cfg;
  cfg.l_max = l_max;
  cfg.n_lat = n_lat;
  cfg.n_lon = n_lon;
  cfg.noise_modes = {{2, 0, 0.05}, {3, 0, 0.05}};
  cfg.alpha = 0.25;
  SpectralField force(l_max, 2);
  force.at(2, 0) = 0.1 * std::sqrt(6.0);
  cfg.forcing = force;
  const FlowEngine engine(cfg, grid);
  const NoisePath path(cfg.stable_params(), cfg.dt, -8.0, 2.0, 7);
  SpectralField v = random_field(l_max, 2, 3);
  v *= 0.5 / h_norm(v);
  OUState z = engine.stationary_z(path, 0.0);
  const double t_step = time_of([&] { engine.step(v, z, path); }, 200);

  std::printf("%-28s %12.3f us\n", "synthesize (OpenMP+FFT)", 1e6 * t_synth);
  std::printf("%-28s %12.3f us  (x%.1f)\n", "synthesize (serial ref)", 1e6 * t_synth_ref,
              t_synth_ref / t_synth);
  std::printf("%-28s %12.3f us\n", "analyze (OpenMP+FFT)", 1e6 * t_ana);
  std::printf("%-28s %12.3f us  (x%.1f)\n", "analyze (serial ref)", 1e6 * t_ana_ref,
              t_ana_ref / t_ana);
  std::printf("%-28s %12.3f us\n", "self-advection", 1e6 * t_adv);
  std::printf("%-28s %12.3f us\n", "ETD-RK2 step", 1e6 * t_step);
  return 0;
}
