#include <benchmark/benchmark.h>

#include <random>

#include "vital/features.hpp"
#include "vital/signal.hpp"
#include "vital/synth.hpp"

namespace {

std::vector<double> random_rr(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.4, 1.4);
  std::vector<double> rr(n);
  for (auto& v : rr) v = u(rng);
  return rr;
}

void BM_ComputeFeatures(benchmark::State& state) {
  const auto rr = vital::rr_from_intervals(random_rr(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(vital::compute_features(rr, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeFeatures)->Arg(12)->Arg(400)->Arg(10000);

void BM_DetectPeaks(benchmark::State& state) {
  vital::StreamScript script;
  script.total_duration_s = 10.0;
  script.noise_seed = 1;
  const double fs = static_cast<double>(state.range(0));
  const auto stream = vital::synthesize_stream(script, fs);
  const auto seg = vital::segment_stream(stream.samples, fs, 10.0);
  const auto& w = seg.windows.front();
  for (auto _ : state) benchmark::DoNotOptimize(vital::detect_peaks(w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.samples.size()));
}
BENCHMARK(BM_DetectPeaks)->Arg(125)->Arg(250)->Arg(500);

}  // namespace
