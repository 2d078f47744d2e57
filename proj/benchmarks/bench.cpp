#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mcdbf/data.hpp"
#include "mcdbf/learners.hpp"
#include "mcdbf/prediction.hpp"
#include "mcdbf/sampling.hpp"

namespace {

using namespace mcdbf;

WeightMatrix random_weights(int k, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  WeightMatrix w(k, d);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < d; ++c) w(r, c) = gauss(rng);
  }
  return w;
}

std::vector<double> random_point(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (double& v : x) v = gauss(rng);
  return x;
}

void BM_PredictTopM(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int d = 64;
  const WeightMatrix w = random_weights(k, d, 11);
  const std::vector<double> x = random_point(d, 12);
  const int m = k / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_top_m(w, x, m));
  }
}
BENCHMARK(BM_PredictTopM)->Arg(4)->Arg(16)->Arg(64);

void BM_SampleSuperarm(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int m = k / 2;
  std::vector<int> greedy;
  for (int i = 1; i <= m; ++i) greedy.push_back(i);
  const ArmDistribution dist = arm_distribution(LabelSet(greedy), k, 0.2);
  std::mt19937_64 rng(13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_superarm(dist, m, rng));
  }
}
BENCHMARK(BM_SampleSuperarm)->Arg(4)->Arg(16)->Arg(64);

void BM_BanditRound(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  LearnerConfig config;
  config.algorithm = Algorithm::kMcDbf;
  config.k = 10;
  config.d = d;
  config.m = 3;
  config.gamma = 0.2;
  config.seed = 14;
  McDbfLearner learner(config);
  const std::vector<double> x = random_point(d, 15);
  const MembershipOracle oracle = [](const LabelSet& set) {
    return set.contains(1);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(learner.step(x, oracle));
  }
}
BENCHMARK(BM_BanditRound)->Arg(16)->Arg(64)->Arg(400);

void BM_FullInfoRound(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  LearnerConfig config;
  config.algorithm = Algorithm::kMcSlp;
  config.k = 10;
  config.d = d;
  config.m = 3;
  McSlpLearner learner(config);
  Example ex;
  ex.features = random_point(d, 16);
  ex.label = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(learner.process(ex));
  }
}
BENCHMARK(BM_FullInfoRound)->Arg(16)->Arg(64)->Arg(400);

void BM_SyntheticNext(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  SynthConfig config;
  config.k = 9;
  config.d = d;
  config.seed = 17;
  SyntheticStream stream(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.next());
  }
}
BENCHMARK(BM_SyntheticNext)->Arg(16)->Arg(64)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
