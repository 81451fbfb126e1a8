// Microbenchmarks for the hot paths of a Monte Carlo trial: weight
// synthesis, symbol synthesis, the ADC model, dictionary construction and
// the full trial.

#include <benchmark/benchmark.h>

#include "ttdbt/estimator.hpp"
#include "ttdbt/experiments.hpp"

using namespace ttdbt;

namespace {

const SystemConfig& full_config() {
  static const SystemConfig cfg;
  return cfg;
}

void BM_AwvIdeal(benchmark::State& state) {
  const SystemConfig& cfg = full_config();
  const TapDesign taps = design_taps(cfg);
  int m = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(awv_ideal(taps, m, cfg));
    m = m % cfg.m_tot + 1;
  }
}
BENCHMARK(BM_AwvIdeal);

void BM_BuildDictionary(benchmark::State& state) {
  const SystemConfig& cfg = full_config();
  const BeamMap bmap = beam_map(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_dictionary(bmap, cfg));
  }
}
BENCHMARK(BM_BuildDictionary);

void BM_SynthRx(benchmark::State& state) {
  const SystemConfig& cfg = full_config();
  const TapDesign taps = design_taps(cfg);
  const BeamMap bmap = beam_map(cfg);
  Rng rng(1);
  const ClusterSet clusters = draw_clusters(
      rng, cfg.clusters(), cfg.cluster_powers_db, cfg.angle_range_rad);
  const ChannelRealization real = realize_channel_rays(rng, clusters, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        synth_rx(rng, real, clusters, taps, bmap, cfg, 0.0));
  }
}
BENCHMARK(BM_SynthRx);

void BM_QuantizeAdc(benchmark::State& state) {
  const SystemConfig& cfg = full_config();
  const BeamMap bmap = beam_map(cfg);
  Rng rng(2);
  RxSymbol sym;
  sym.y.resize(static_cast<Eigen::Index>(bmap.used.size()));
  for (Eigen::Index i = 0; i < sym.y.size(); ++i) sym.y(i) = rng.cnormal(1.0);
  sym.noise_var = 0.01;
  sym.combined_noise_var = 0.16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantize_adc(rng, sym, bmap, cfg));
  }
}
BENCHMARK(BM_QuantizeAdc);

void BM_RunTrial(benchmark::State& state) {
  const TrialContext ctx = TrialContext::make(full_config(), Architecture::rf,
                                              0.0, 0.0, 0.0, 0.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(seed++, ctx));
  }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
