// Serial reference vs OpenMP paths of the parallel kernels.
//
//   ./binwatch_bench --benchmark_filter=Split
//
// Arg(0) is the serial path, Arg(1) the parallel one. Results are identical
// by construction; only wall time differs.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "binwatch/config.hpp"
#include "binwatch/evaluation.hpp"
#include "binwatch/gbr.hpp"
#include "binwatch/kernels.hpp"
#include "binwatch/pipeline.hpp"

using namespace binwatch;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

// Same shape as the daily dataset: about 900 rows of 13 predictors.
struct RandomData {
  FeatureMatrix x;
  std::vector<double> y;
  std::vector<std::size_t> idx;
};

const RandomData& random_data() {
  static const RandomData d = [] {
    std::mt19937_64 gen(1);
    std::vector<std::vector<double>> rows;
    RandomData r;
    for (std::size_t i = 0; i < 900; ++i) {
      std::vector<double> row;
      for (int f = 0; f < 13; ++f) row.push_back(static_cast<double>(gen() % 500));
      rows.push_back(row);
      r.y.push_back(static_cast<double>(gen() % 1500));
      r.idx.push_back(i);
    }
    r.x = FeatureMatrix::from_rows(rows);
    return r;
  }();
  return d;
}

const EvalResult& default_eval() {
  static const EvalResult e = [] {
    RunConfig cfg;
    cfg.daily_models = {"naive"};
    cfg.hourly_models = {"naive"};
    cfg.policies = {"hour:0", "forecast:naive"};
    return run_eval(cfg, to_input(generate(cfg.synthetic_config())));
  }();
  return e;
}

void BM_SplitSearch(benchmark::State& state) {
  const auto& d = random_data();
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::best_split(exec, d.x, d.y, d.idx, 1));
}
BENCHMARK(BM_SplitSearch)->Arg(0)->Arg(1);

void BM_GbrFit(benchmark::State& state) {
  const auto& d = random_data();
  GradientBoostingParams p;
  p.n_stages = 100;
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fit_gbr(d.x, d.y, p, exec));
}
BENCHMARK(BM_GbrFit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KFoldGbr(benchmark::State& state) {
  const auto& e = default_eval();
  const auto history = std::make_shared<const DailySeries>(e.daily);
  const auto spec = parse_model_spec("gbr");
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kfold_cv(e.dataset.rows, spec, 10, 42, history, exec));
}
BENCHMARK(BM_KFoldGbr)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ComparePolicies(benchmark::State& state) {
  const auto& e = default_eval();
  const BinConfig bin;
  const auto& f = e.hourly_forecasts;
  const auto events = derive_events(f.actual.counts, bin);
  std::vector<PolicySpec> policies;
  for (int h = 0; h <= 6; ++h) policies.push_back(policy::HourOffset{h});
  std::vector<ForecastSource> sources;
  for (std::size_t i = 0; i < f.keys.size(); ++i) {
    sources.push_back({f.keys[i], f.values[i]});
    policies.push_back(policy::ForecastBased{f.keys[i], bin.notification_threshold});
  }
  const auto exec = exec_of(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(compare_policies(policies, events, sources, f.actual.counts.size(), exec));
}
BENCHMARK(BM_ComparePolicies)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
