#include <benchmark/benchmark.h>

#include "qpurify/analytic.hpp"
#include "qpurify/stats.hpp"

using namespace qpurify;

static void density_p_q(benchmark::State& state) {
  const Rate eta(1.0);
  double q = -0.999;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_q(q, 2.0, eta));
    q = q > 0.998 ? -0.999 : q + 1e-3;
  }
}
BENCHMARK(density_p_q);

static void mean_purity_quadrature(benchmark::State& state) {
  const Rate eta(1.0);
  const double t = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(mean_purity(t, eta));
}
BENCHMARK(mean_purity_quadrature)->Arg(1)->Arg(10)->Arg(200);

static void analytic_cdf_table(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(AnalyticCdf(DensityKind::P_q, Rate(1.0), 2.0));
}
BENCHMARK(analytic_cdf_table)->Unit(benchmark::kMillisecond);

static void fokker_planck_sweep(benchmark::State& state) {
  const Rate eta(1.0);
  for (auto _ : state) {
    double worst = 0.0;
    for (int i = 0; i <= 120; ++i)
      for (int j = 0; j < 50; ++j)
        worst = std::max(worst, std::abs(fokker_planck_residual(-6.0 + 0.1 * i, 0.1 + 0.1 * j, eta)));
    benchmark::DoNotOptimize(worst);
  }
}
BENCHMARK(fokker_planck_sweep);
