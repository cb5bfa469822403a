#include <benchmark/benchmark.h>

#include "qpurify/collisional.hpp"
#include "qpurify/rng.hpp"
#include "qpurify/sde.hpp"

using namespace qpurify;

static void rng_gaussian(benchmark::State& state) {
  RngStream rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(rng.gaussian());
}
BENCHMARK(rng_gaussian);

static void em_q_trajectory(benchmark::State& state) {
  const double sigma = std::sqrt(1e-3);
  for (auto _ : state) {
    RngStream rng = RngStream::for_trajectory(7, 0);
    double q = 0.0;
    for (int n = 0; n < 2000; ++n) q = em_step_q(q, sigma * rng.gaussian());
    benchmark::DoNotOptimize(q);
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(em_q_trajectory);

static void em_Q_trajectory(benchmark::State& state) {
  const double sigma = std::sqrt(1e-3);
  for (auto _ : state) {
    RngStream rng = RngStream::for_trajectory(7, 0);
    double Q = 0.0;
    for (int n = 0; n < 2000; ++n) Q = em_step_Q(Q, 1.0, 1e-3, sigma * rng.gaussian());
    benchmark::DoNotOptimize(Q);
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(em_Q_trajectory);

static void collisional_trajectory(benchmark::State& state) {
  for (auto _ : state) {
    CollisionalWalker walker(Rate(1.0), 1e-3);
    RngStream rng = RngStream::for_trajectory(7, 0);
    for (int n = 0; n < 2000; ++n) walker.advance(rng);
    benchmark::DoNotOptimize(walker.q());
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(collisional_trajectory);

static void ensemble_langevin_q(benchmark::State& state) {
  SimConfig cfg;
  cfg.n_traj = state.range(0);
  cfg.n_steps = 2000;
  cfg.snapshot_times = {0.1, 0.5, 2.0};
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.n_traj * cfg.n_steps);
}
BENCHMARK(ensemble_langevin_q)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
