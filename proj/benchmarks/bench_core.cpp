#include "spa/em_map.hpp"
#include "spa/likelihood.hpp"
#include "spa/simulate.hpp"
#include "spa/smc.hpp"

#include <benchmark/benchmark.h>

namespace {

spa::Dataset study(spa::Index n, spa::Index p)
{
  spa::SimSpec spec;
  spec.n = n;
  spec.p = p;
  spec.block_size = std::min<spa::Index>(p, 10);
  spec.within_block_corr = 0.5;
  spec.nonzero = std::vector<spa::FixedEffect>{{1, 0.5}};
  return spa::simulate_dataset(spec).data;
}

void BM_LikelihoodDelta(benchmark::State& state)
{
  const auto data = study(state.range(0), 10);
  auto cache = spa::log_likelihood(data, Eigen::VectorXd::Zero(10));
  spa::Index j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spa::log_likelihood_after_delta(cache, data, j, 0.01));
    j = (j + 1) % 10;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LikelihoodDelta)->Arg(200)->Arg(500)->Arg(2000);

void BM_MwgSweep(benchmark::State& state)
{
  const auto p = state.range(0);
  const auto data = study(500, p);
  spa::Particle part;
  part.beta = Eigen::VectorXd::Zero(p);
  part.cache = spa::log_likelihood(data, part.beta);
  const spa::GtPrior prior(4.0, 0.1);
  spa::Engine rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(spa::mwg_sweep(part, data, prior, 0.5, rng));
  state.SetItemsProcessed(state.iterations() * p);
}
BENCHMARK(BM_MwgSweep)->Arg(20)->Arg(50);

void BM_SmcStep(benchmark::State& state)
{
  const auto data = study(500, 20);
  spa::SmcConfig cfg;
  cfg.particles = static_cast<std::size_t>(state.range(0));
  cfg.burn_in = 200;
  cfg.thin = 1;
  auto sys = spa::init_particles(data, spa::GtPrior::from_rate(4.0, 2.0), cfg);
  for (auto _ : state) {
    const double b = sys.b * 0.98;
    benchmark::DoNotOptimize(spa::smc_step(sys, data, 4.0, b, cfg));
  }
}
BENCHMARK(BM_SmcStep)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_WeightedL1(benchmark::State& state)
{
  const auto p = state.range(0);
  const auto data = study(500, p);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(p, 5.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(spa::weighted_l1_logistic(data, w, Eigen::VectorXd::Zero(p)));
}
BENCHMARK(BM_WeightedL1)->Arg(50)->Arg(184)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
