#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "binwatch/error.hpp"
#include "binwatch/evaluation.hpp"
#include "oracles.hpp"

using namespace binwatch;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}; }

struct Fixture {
  std::shared_ptr<DailySeries> daily = std::make_shared<DailySeries>();
  HourlySeries hourly;
  std::vector<FeatureRow> rows;
};

// Weekly pattern plus noise, with matching feature rows built by hand.
Fixture make_fixture(std::uint64_t seed, std::size_t n_days) {
  std::mt19937_64 gen(seed);
  BusinessCalendar cal;
  Fixture f;
  f.hourly.open_hour = 8;
  f.hourly.hours_per_day = 4;
  const double level[6] = {300, 280, 320, 340, 420, 600};
  for (Date d = ymd(2015, 1, 5); f.daily->size() < n_days; d = add_days(d, 1)) {
    if (!cal.is_open_day(d)) continue;
    const auto wd = static_cast<std::size_t>(iso_weekday(d) - 1);
    std::int64_t total = 0;
    for (int h = 0; h < 4; ++h) {
      const auto c = static_cast<std::int64_t>(level[wd] / 4 * (0.5 + 0.25 * h) + static_cast<double>(gen() % 40));
      f.hourly.counts.push_back(c);
      total += c;
    }
    f.hourly.days.push_back(d);
    f.daily->dates.push_back(d);
    f.daily->values.push_back(static_cast<double>(total));
  }
  for (std::size_t i = 30; i < n_days; ++i) {
    FeatureRow r;
    r.date = f.daily->dates[i];
    r.target = f.daily->values[i];
    for (std::size_t k = 0; k < kLags.size(); ++k) r.lags[k] = f.daily->values[i - static_cast<std::size_t>(kLags[k])];
    r.weekday = iso_weekday(r.date);
    r.month = static_cast<int>(unsigned(r.date.month()));
    r.year = static_cast<int>(r.date.year());
    f.rows.push_back(r);
  }
  return f;
}

}  // namespace

TEST(Metrics, MaeExamples) {
  EXPECT_EQ(mae(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_EQ(mae(std::vector<double>{0, 4}, std::vector<double>{2, 2}), 2.0);
  EXPECT_DOUBLE_EQ(mae_over_mean(std::vector<double>{10, 10}, std::vector<double>{11, 9}), 10.0);
  EXPECT_EQ(mae_over_mean(std::vector<double>{3, 5}, std::vector<double>{3, 5}), 0.0);
  EXPECT_THROW(mae(std::vector<double>{1}, std::vector<double>{1, 2}), DataError);
  EXPECT_THROW(mae(std::vector<double>{}, std::vector<double>{}), DataError);
  EXPECT_THROW(mae_over_mean(std::vector<double>{0, 0}, std::vector<double>{1, 1}), DataError);
}

TEST(Metrics, MaeMatchesBruteForceAndIsPermutationInvariant) {
  std::mt19937_64 gen(100);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + gen() % 200;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(gen);
      b[i] = u(gen);
    }
    const double m = mae(a, b);
    EXPECT_EQ(m, oracle::brute_mae(a, b));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> pa(n), pb(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = a[perm[i]];
      pb[i] = b[perm[i]];
    }
    EXPECT_NEAR(mae(pa, pb), m, 1e-9 * std::max(1.0, m));
  }
}

TEST(Folds, PartitionProperty) {
  for (int k = 2; k <= 20; ++k) {
    for (std::size_t n = static_cast<std::size_t>(k); n <= 200; n += 1 + n / 7) {
      const auto f = make_folds(n, k, 42 + n);
      ASSERT_EQ(f.folds.size(), static_cast<std::size_t>(k));
      std::vector<int> seen(n, 0);
      std::size_t lo = n, hi = 0;
      for (std::size_t j = 0; j < f.folds.size(); ++j) {
        lo = std::min(lo, f.folds[j].size());
        hi = std::max(hi, f.folds[j].size());
        EXPECT_TRUE(std::is_sorted(f.folds[j].begin(), f.folds[j].end()));
        for (auto i : f.folds[j]) {
          ++seen[i];
          EXPECT_EQ(f.fold_of[i], static_cast<int>(j));
        }
      }
      EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; })) << "k=" << k << " n=" << n;
      EXPECT_LE(hi - lo, 1u);
      EXPECT_GE(lo, 1u);
    }
  }
}

TEST(Folds, SeedDeterminesAssignment) {
  EXPECT_EQ(make_folds(100, 10, 7).fold_of, make_folds(100, 10, 7).fold_of);
  EXPECT_NE(make_folds(100, 10, 7).fold_of, make_folds(100, 10, 8).fold_of);
  const auto loo = make_folds(12, 12, 1);
  for (const auto& fold : loo.folds) EXPECT_EQ(fold.size(), 1u);
  EXPECT_THROW(make_folds(5, 1, 1), ConfigError);
  EXPECT_THROW(make_folds(5, 6, 1), DataError);
}

TEST(CrossValidation, BaselinesScoreTheSamePointsFromHistory) {
  const auto fx = make_fixture(1, 200);
  const auto r = kfold_cv(fx.rows, spec::SeasonalNaive{6}, 10, 42, fx.daily);
  ASSERT_EQ(r.oof_forecasts.size(), fx.rows.size());
  for (std::size_t i = 0; i < fx.rows.size(); ++i) EXPECT_EQ(r.oof_forecasts[i], fx.rows[i].lag(6));
  EXPECT_EQ(r.report.n, fx.rows.size());
  EXPECT_EQ(r.report.fold_mae.size(), 10u);
  std::vector<double> actual;
  for (const auto& row : fx.rows) actual.push_back(row.target);
  EXPECT_DOUBLE_EQ(r.report.mae, mae(actual, r.oof_forecasts));
}

TEST(CrossValidation, PerfectlyPeriodicSeriesScoresZero) {
  auto fx = make_fixture(2, 150);
  for (std::size_t i = 0; i < fx.daily->size(); ++i) fx.daily->values[i] = 100.0 * (1 + i % 6);
  for (auto& row : fx.rows) {
    const auto i = static_cast<std::size_t>(std::find(fx.daily->dates.begin(), fx.daily->dates.end(), row.date) -
                                            fx.daily->dates.begin());
    row.target = fx.daily->values[i];
  }
  const auto r = kfold_cv(fx.rows, spec::SeasonalNaive{6}, 5, 3, fx.daily);
  EXPECT_EQ(r.report.mae, 0.0);
  EXPECT_EQ(*r.report.mae_over_mean_pct, 0.0);
}

TEST(CrossValidation, TrainedModelsAreDeterministicAndThreadIndependent) {
  const auto fx = make_fixture(3, 260);
  GradientBoostingParams p;
  p.n_stages = 25;
  const ModelSpec gbr = spec::GradientBoosting{p};
  const auto a = kfold_cv(fx.rows, gbr, 10, 42, fx.daily, Exec::Serial);
  const auto b = kfold_cv(fx.rows, gbr, 10, 42, fx.daily, Exec::Parallel);
  const auto c = kfold_cv(fx.rows, gbr, 10, 42, fx.daily, Exec::Serial);
  EXPECT_EQ(a.oof_forecasts, b.oof_forecasts);
  EXPECT_EQ(a.oof_forecasts, c.oof_forecasts);
  EXPECT_EQ(a.report.fold_mae, b.report.fold_mae);
  const auto ols = kfold_cv(fx.rows, spec::LinearRegression{}, 10, 42, fx.daily, Exec::Parallel);
  EXPECT_GT(ols.report.mae, 0.0);
}

TEST(CrossValidation, OutOfFoldForecastsIgnoreTheirOwnFold) {
  // Perturbing a row's target must not change its own out-of-fold forecast.
  auto fx = make_fixture(4, 180);
  const auto folds = make_folds(fx.rows.size(), 5, 9);
  const auto base = kfold_cv(fx.rows, spec::LinearRegression{}, folds, fx.daily);
  auto changed = fx.rows;
  changed[17].target += 5000;
  const auto again = kfold_cv(changed, spec::LinearRegression{}, folds, fx.daily);
  EXPECT_EQ(base.oof_forecasts[17], again.oof_forecasts[17]);
  for (std::size_t i = 0; i < fx.rows.size(); ++i) {
    if (folds.fold_of[i] == folds.fold_of[17]) EXPECT_EQ(base.oof_forecasts[i], again.oof_forecasts[i]);
    else EXPECT_NE(base.oof_forecasts[i], again.oof_forecasts[i]);
  }
}

TEST(CrossValidation, InvalidInputs) {
  const auto fx = make_fixture(5, 60);
  EXPECT_THROW(kfold_cv(fx.rows, spec::Naive{}, 1, 1, fx.daily), ConfigError);
  EXPECT_THROW(kfold_cv(fx.rows, spec::SeasonalMovingAverage{0}, 5, 1, fx.daily), ConfigError);
}

TEST(HourlyEval, PerfectDailyForecastWithExactProfileScoresZero) {
  // Every day has the same intraday shape, so the mapping is exact.
  HourlySeries s;
  s.open_hour = 8;
  s.hours_per_day = 3;
  BusinessCalendar cal;
  std::vector<Date> dates;
  std::vector<double> daily;
  for (Date d = ymd(2015, 3, 2); s.days.size() < 60; d = add_days(d, 1)) {
    if (!cal.is_open_day(d)) continue;
    const std::int64_t k = 1 + static_cast<std::int64_t>(s.days.size() % 5);
    s.days.push_back(d);
    for (std::int64_t c : {k * 10, k * 30, k * 60}) s.counts.push_back(c);
    if (s.days.size() > 10) {
      dates.push_back(d);
      daily.push_back(static_cast<double>(k * 100));
    }
  }
  const auto r = hourly_eval("perfect", "Perfect", dates, daily, s);
  EXPECT_NEAR(r.report.mae, 0.0, 1e-9);
  EXPECT_EQ(r.report.n, dates.size() * 3);
  EXPECT_EQ(r.forecasts.size(), dates.size() * 3);
}

TEST(HourlyEval, ErrorsAreReportedPerHour) {
  const auto fx = make_fixture(6, 120);
  std::vector<Date> dates;
  std::vector<double> zeros;
  for (const auto& row : fx.rows) {
    dates.push_back(row.date);
    zeros.push_back(0.0);
  }
  const auto r = hourly_eval("zero", "Zero", dates, zeros, fx.hourly);
  // A zero forecast's hourly MAE is the hourly mean of the scored days.
  double sum = 0;
  for (std::size_t d = 30; d < fx.hourly.days.size(); ++d)
    for (auto c : fx.hourly.day(d)) sum += static_cast<double>(c);
  EXPECT_NEAR(r.report.mae, sum / static_cast<double>(r.report.n), 1e-9);
  EXPECT_NEAR(*r.report.mae_over_mean_pct, 100.0, 1e-9);

  std::vector<double> wrong_len(dates.size() - 1, 0.0);
  EXPECT_THROW(hourly_eval("x", "x", dates, wrong_len, fx.hourly), DataError);
}

TEST(Reports, TableFormat) {
  EvalReport a{"naive", "Naive forecast", 12.3456, 4.56789, {}, 100, 10};
  EvalReport b{"zero", "Zero", 1.0, std::nullopt, {}, 0, 3};
  std::ostringstream out;
  write_table(out, std::vector<EvalReport>{a, b});
  EXPECT_EQ(out.str(), "method,mae,mae_over_mean_pct\nnaive,12.3456,4.5679\nzero,1.0000,NA\n");
  const auto j = to_json(b);
  EXPECT_TRUE(j["mae_over_mean_pct"].is_null());
}
