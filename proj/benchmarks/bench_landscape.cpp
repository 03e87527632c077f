#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "octo/analysis.hpp"
#include "octo/octopus.hpp"
#include "octo/optimize.hpp"
#include "octo/rng.hpp"

namespace {

const double kE = std::exp(1.0);

octo::LandscapeParams params_for(int d) { return {d, 3.0, 1.0, kE}; }

void BM_octopus_eval(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const octo::OctopusLandscape landscape(params_for(d));
  octo::RngStream rng(1, 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  landscape.sample_domain_point(rng, x);
  std::vector<double> grad(static_cast<std::size_t>(d));
  double f = 0.0;
  octo::RegionId reg;
  for (auto _ : state) {
    landscape.eval_into(x, f, grad, reg);
    benchmark::DoNotOptimize(f);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_octopus_eval)->Arg(5)->Arg(10)->Arg(25);

void BM_octopus_hessian_lambda_min(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const octo::OctopusLandscape landscape(params_for(d));
  octo::RngStream rng(2, 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  landscape.sample_domain_point(rng, x);
  for (auto _ : state) {
    const double lm = octo::lambda_min(landscape.hessian(x));
    benchmark::DoNotOptimize(lm);
  }
}
BENCHMARK(BM_octopus_hessian_lambda_min)->Arg(5)->Arg(10)->Arg(25);

void BM_gd_steps(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const octo::OctopusLandscape landscape(params_for(d));
  octo::RngStream rng(3, 0);
  const std::vector<double> x0 = octo::sample_init(rng, d, octo::InitScheme::cube(0.0, 1.0));
  octo::GDConfig cfg;
  cfg.eta = 1.0 / 12.0;
  cfg.max_iters = 1000;
  cfg.record_stride = cfg.max_iters;
  cfg.point_stride = cfg.max_iters;
  for (auto _ : state) {
    const auto traj = octo::run_gd(landscape, x0, cfg);
    benchmark::DoNotOptimize(traj.total_iters);
  }
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_gd_steps)->Arg(5)->Arg(10);

void BM_pgd_steps(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const octo::OctopusLandscape landscape(params_for(d));
  octo::RngStream rng(4, 0);
  const std::vector<double> x0 = octo::sample_init(rng, d, octo::InitScheme::unit_cube());
  octo::PGDConfig cfg;
  cfg.gd.eta = 1.0 / 12.0;
  cfg.gd.max_iters = 1000;
  cfg.gd.record_stride = cfg.gd.max_iters;
  cfg.gd.point_stride = cfg.gd.max_iters;
  cfg.r = kE / 100.0;
  cfg.g_thres = kE / 100.0;
  cfg.t_thres = 1;
  cfg.seed = 7;
  for (auto _ : state) {
    const auto traj = octo::run_pgd(landscape, x0, cfg);
    benchmark::DoNotOptimize(traj.total_iters);
  }
  state.SetItemsProcessed(state.iterations() * cfg.gd.max_iters);
}
BENCHMARK(BM_pgd_steps)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
