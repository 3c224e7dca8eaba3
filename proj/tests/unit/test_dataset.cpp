#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "binwatch/dataset.hpp"
#include "binwatch/error.hpp"
#include "oracles.hpp"

using namespace binwatch;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}; }

DailySeries series_over(const BusinessCalendar& cal, Date first, std::size_t n_open,
                        const std::function<double(std::size_t)>& value) {
  DailySeries s;
  for (Date d = first; s.size() < n_open; d = add_days(d, 1)) {
    if (!cal.is_open_day(d)) continue;
    s.dates.push_back(d);
    s.values.push_back(value(s.size()));
  }
  return s;
}

std::vector<WeatherRecord> weather_for(Date first, Date last) {
  std::vector<WeatherRecord> w;
  int i = 0;
  for (Date d = first; !(last < d); d = add_days(d, 1), ++i) w.push_back({d, 0.1 * (i % 7), 5.0 + i % 11});
  return w;
}

}  // namespace

TEST(Dataset, ThirtyOneBusinessDaysGiveOneRow) {
  BusinessCalendar cal;
  const auto s = series_over(cal, ymd(2015, 3, 2), 31, [](std::size_t i) { return 100.0 + static_cast<double>(i); });
  const auto ds = build_dataset(s, cal, weather_for(s.dates.front(), s.dates.back()));
  ASSERT_EQ(ds.rows.size(), 1u);
  EXPECT_EQ(ds.rows[0].lag(30), 100.0);
  EXPECT_EQ(ds.rows[0].lag(1), 129.0);
  EXPECT_EQ(ds.rows[0].target, 130.0);
}

TEST(Dataset, TooShortIsError) {
  BusinessCalendar cal;
  const auto s = series_over(cal, ymd(2015, 3, 2), 30, [](std::size_t) { return 1.0; });
  EXPECT_THROW(build_dataset(s, cal, weather_for(s.dates.front(), s.dates.back())), DataError);
}

TEST(Dataset, ConstantSeriesGivesConstantLags) {
  BusinessCalendar cal;
  const auto s = series_over(cal, ymd(2015, 3, 2), 80, [](std::size_t) { return 42.0; });
  const auto ds = build_dataset(s, cal, weather_for(s.dates.front(), s.dates.back()));
  EXPECT_EQ(ds.rows.size(), 50u);
  for (const auto& r : ds.rows)
    for (double v : r.lags) EXPECT_EQ(v, 42.0);
}

TEST(Dataset, LagsMatchCalendarWalk) {
  const std::set<Date> holidays{ymd(2015, 4, 2), ymd(2015, 4, 3), ymd(2015, 4, 6), ymd(2015, 5, 1)};
  BusinessCalendar cal(8, 21, {7}, holidays);
  std::mt19937_64 gen(11);
  const auto s = series_over(cal, ymd(2015, 3, 10), 70, [&](std::size_t) { return static_cast<double>(gen() % 1000); });
  std::map<Date, double> by_date;
  for (std::size_t i = 0; i < s.size(); ++i) by_date[s.dates[i]] = s.values[i];

  const auto ds = build_dataset(s, cal, weather_for(s.dates.front(), s.dates.back()));
  ASSERT_EQ(ds.rows.size(), s.size() - 30);
  for (const auto& r : ds.rows) {
    for (int k : kLags) {
      const auto expect = oracle::calendar_walk_lag(
          r.date, k, [&](Date d) { return cal.is_open_day(d); },
          [&](Date d) -> std::optional<double> {
            auto it = by_date.find(d);
            return it == by_date.end() ? std::nullopt : std::optional<double>(it->second);
          },
          s.dates.front());
      ASSERT_TRUE(expect.has_value());
      EXPECT_EQ(r.lag(k), *expect) << format_date(r.date) << " lag " << k;
    }
  }
}

TEST(Dataset, CalendarFeatures) {
  // Wednesday 2015-05-13 precedes Ascension Day; Friday 2015-05-15 follows it.
  BusinessCalendar cal(8, 21, {7}, {ymd(2015, 5, 14)});
  const auto s = series_over(cal, ymd(2015, 3, 20), 60, [](std::size_t i) { return static_cast<double>(i); });
  const auto ds = build_dataset(s, cal, weather_for(s.dates.front(), s.dates.back()));
  for (const auto& r : ds.rows) {
    EXPECT_GE(r.weekday, 1);
    EXPECT_LE(r.weekday, 6);
    EXPECT_EQ(r.weekday, iso_weekday(r.date));
    EXPECT_EQ(r.month, static_cast<int>(unsigned(r.date.month())));
    EXPECT_EQ(r.year, 2015);
    EXPECT_EQ(r.day_before_holiday, r.date == ymd(2015, 5, 13));
    EXPECT_EQ(r.day_after_holiday, r.date == ymd(2015, 5, 15));
  }
}

TEST(Dataset, WeatherGapIsCarriedForward) {
  BusinessCalendar cal;
  const auto s = series_over(cal, ymd(2015, 3, 2), 40, [](std::size_t) { return 5.0; });
  auto w = weather_for(s.dates.front(), s.dates.back());
  const Date gap = s.dates[35];
  const auto it = std::find_if(w.begin(), w.end(), [&](const WeatherRecord& r) { return r.date == gap; });
  const WeatherRecord before = *(it - 1);
  w.erase(it);
  const auto ds = build_dataset(s, cal, w);
  ASSERT_EQ(ds.weather_filled, std::vector<Date>{gap});
  for (const auto& r : ds.rows) {
    if (r.date != gap) continue;
    EXPECT_EQ(r.precipitation_intensity, before.precipitation_intensity);
    EXPECT_EQ(r.apparent_max_temperature, before.apparent_max_temperature);
  }

  // The first scored day has nothing to carry forward from.
  auto missing_first = weather_for(add_days(s.dates[30], 1), s.dates.back());
  EXPECT_THROW(build_dataset(s, cal, missing_first), DataError);
}

TEST(Dataset, PredictorOrderMatchesNames) {
  FeatureRow r;
  r.lags = {1, 6, 12, 18, 24, 30};
  r.weekday = 3;
  r.month = 7;
  r.year = 2016;
  r.day_before_holiday = true;
  r.precipitation_intensity = 0.5;
  r.apparent_max_temperature = 21.0;
  const auto p = r.predictors();
  EXPECT_EQ(kPredictorNames[5], "lag_30");
  EXPECT_EQ(p[5], 30.0);
  EXPECT_EQ(p[6], 3.0);
  EXPECT_EQ(p[8], 2016.0);
  EXPECT_EQ(p[9], 1.0);
  EXPECT_EQ(p[10], 0.0);
  EXPECT_EQ(p[12], 21.0);
}

TEST(Dataset, AutocorrelationBasics) {
  const std::vector<double> v{1, 3, 2, 5, 4, 6, 2, 8};
  const auto r = autocorrelation(v, 3);
  ASSERT_TRUE(r.has_value());
  EXPECT_DOUBLE_EQ((*r)[0], 1.0);

  // Direct evaluation of the estimator with global mean and denominator n.
  double mean = 0;
  for (double x : v) mean += x;
  mean /= 8;
  double c0 = 0, c2 = 0;
  for (std::size_t i = 0; i < 8; ++i) c0 += (v[i] - mean) * (v[i] - mean);
  for (std::size_t i = 2; i < 8; ++i) c2 += (v[i] - mean) * (v[i - 2] - mean);
  EXPECT_NEAR((*r)[2], c2 / c0, 1e-12);
  for (double x : *r) {
    EXPECT_LE(x, 1.0);
    EXPECT_GE(x, -1.0);
  }

  EXPECT_FALSE(autocorrelation(std::vector<double>(10, 3.0), 3).has_value());
  EXPECT_THROW(autocorrelation(v, 8), DataError);
}

TEST(Dataset, WhiteNoiseAutocorrelationIsSmall) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> v(1000);
  for (auto& x : v) x = n(gen);
  const auto r = autocorrelation(v, 30);
  for (int k = 1; k <= 30; ++k) EXPECT_LT(std::abs((*r)[static_cast<std::size_t>(k)]), 0.1) << k;
}

TEST(Dataset, WeeklyPatternPeaksAtMultiplesOfSix) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n(0, 20);
  const double level[6] = {400, 380, 420, 450, 520, 750};
  std::vector<double> v(600);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = level[i % 6] + n(gen);
  const auto r = *autocorrelation(v, 31);
  for (int k : {6, 12, 18, 24, 30}) {
    EXPECT_GT(r[static_cast<std::size_t>(k)], r[static_cast<std::size_t>(k - 1)]);
    EXPECT_GT(r[static_cast<std::size_t>(k)], r[static_cast<std::size_t>(k + 1)]);
  }
}

TEST(Dataset, SeriesStatsDefinitions) {
  const auto c = series_stats(std::vector<double>(5, 7.0));
  EXPECT_EQ(*c.cov_pct, 0.0);
  EXPECT_EQ(c.zero_share_pct, 0.0);

  const auto s = series_stats(std::vector<double>{0, 2});
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_DOUBLE_EQ(*s.cov_pct, 100.0);
  EXPECT_DOUBLE_EQ(s.zero_share_pct, 50.0);

  EXPECT_FALSE(series_stats(std::vector<double>(4, 0.0)).cov_pct.has_value());
  EXPECT_THROW(series_stats(std::vector<double>{}), DataError);
}

TEST(Dataset, WeatherFileRoundTrip) {
  const auto w = weather_for(ymd(2015, 1, 1), ymd(2015, 1, 20));
  std::stringstream buf;
  write_weather(buf, w);
  const auto back = read_weather(buf);
  ASSERT_EQ(back.size(), w.size());
  EXPECT_EQ(back[5].apparent_max_temperature, w[5].apparent_max_temperature);
  std::istringstream neg("date,precip_mm_h,apparent_max_temp_c\n2015-01-01,-1,3\n");
  EXPECT_THROW(read_weather(neg), ParseError);
}
