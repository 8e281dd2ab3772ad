#include <benchmark/benchmark.h>

#include <random>

#include "ictal/fft.hpp"
#include "ictal/pipeline.hpp"
#include "ictal/spectral.hpp"
#include "ictal/synthgen.hpp"
#include "ictal/tsforest.hpp"

using namespace ictal;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

// One hour of synthetic data shared by the forest benchmarks.
const SynthDataset& hour() {
  static const SynthDataset d = [] {
    SynthConfig c;
    c.duration_s = 3600;
    c.n_seizures = 1;
    c.seed = 5;
    return generate(c);
  }();
  return d;
}

const ForestModel& model() {
  static const ForestModel m = [] {
    TrainOptions o;
    o.forest.n_trees = 100;
    o.forest.seed = 1;
    const std::vector<SignalRecording> recs = {hour().ecog};
    return train_modality(recs, hour().annotations, o, Modality::Ecog);
  }();
  return m;
}

}  // namespace

static void BM_FftMagnitude(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const RealFft plan(x.size());
  std::vector<Complex> out(plan.bins());
  for (auto _ : state) {
    plan.forward(x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FftMagnitude)->Arg(7200)->Arg(30000)->Arg(1024)->Arg(2 * 1031);

static void BM_ForestPredict(benchmark::State& state) {
  const auto& m = model();
  const auto x = noise(m.feature_length);
  for (auto _ : state) benchmark::DoNotOptimize(predict(m, x));
}
BENCHMARK(BM_ForestPredict);

static void BM_ScoreHour(benchmark::State& state) {
  const auto& m = model();
  PipelineOptions o;
  o.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(score_recording(m, hour().ecog, o));
  state.SetLabel("1 h ECoG at 500 Hz");
}
BENCHMARK(BM_ScoreHour)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
