#include <benchmark/benchmark.h>

#include <filesystem>
#include <unistd.h>

#include "polcov/bias.hpp"
#include "polcov/inferential.hpp"
#include "polcov/pipeline.hpp"
#include "polcov/random.hpp"
#include "polcov/synthetic.hpp"

namespace fs = std::filesystem;
using namespace polcov;

namespace {

WordFrequencies random_frequencies(std::size_t words, std::uint64_t seed) {
  Rng rng(seed);
  WordFrequencies f;
  for (std::size_t i = 0; i < words; ++i) {
    WordCount w;
    w.word = {"w" + std::to_string(i), "ADJ"};
    w.f = rng.below(50);
    w.m = rng.below(150) + (w.f == 0 ? 1 : 0);
    f.total_f += w.f;
    f.total_m += w.m;
    f.words.push_back(w);
  }
  std::sort(f.words.begin(), f.words.end(), [](const auto& a, const auto& b) { return a.word.lemma < b.word.lemma; });
  f.politicians_f = 120;
  f.politicians_m = 400;
  return f;
}

void BM_LeaveOneOut(benchmark::State& state) {
  const auto f = random_frequencies(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(leave_one_out(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LeaveOneOut)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_SaturatedQuantileModel(benchmark::State& state) {
  Rng rng(2);
  std::vector<SentimentObservation> obs;
  for (std::int64_t i = 0; i < state.range(0); ++i)
    obs.push_back({static_cast<double>(rng.below(11)) / 5.0 - 1 + (rng.uniform() - 0.5) * 0.1,
                   rng.below(3) == 0 ? Gender::F : Gender::M, rng.below(2) ? SourceType::online : SourceType::traditional});
  for (auto _ : state) benchmark::DoNotOptimize(fit_quantile_model(obs, 0.75));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SaturatedQuantileModel)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_ExtractSynthetic(benchmark::State& state) {
  const fs::path dir = fs::temp_directory_path() / ("polcov-bench-" + std::to_string(::getpid()));
  SyntheticSpec spec;
  spec.documents = static_cast<std::size_t>(state.range(0));
  auto config = generate_synthetic(spec, dir / "bundle").config;
  config.workers = 1;
  config.out = dir / "out";
  for (auto _ : state) run_extract(config);
  fs::remove_all(dir);
}
BENCHMARK(BM_ExtractSynthetic)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
