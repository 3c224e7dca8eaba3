#pragma once

// Daily supervised-learning rows and exploratory statistics.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "binwatch/calendar.hpp"

namespace binwatch {

struct WeatherRecord {
  Date date;
  double precipitation_intensity = 0.0;   // mm/h
  double apparent_max_temperature = 0.0;  // degrees C
};

/// Lags in business days.
inline constexpr std::array<int, 6> kLags{1, 6, 12, 18, 24, 30};
inline constexpr int kMaxLag = 30;
inline constexpr std::size_t kNumPredictors = 13;

inline constexpr std::array<std::string_view, kNumPredictors> kPredictorNames{
    "lag_1",   "lag_6", "lag_12", "lag_18",
    "lag_24",  "lag_30", "weekday", "month",
    "year",    "day_before_holiday", "day_after_holiday",
    "precipitation_intensity", "apparent_max_temperature"};

struct FeatureRow {
  Date date;
  double target = 0.0;
  std::array<double, kLags.size()> lags{};  // ordered as kLags
  int weekday = 0;                          // Monday = 1 ... Saturday = 6
  int month = 0;
  int year = 0;
  bool day_before_holiday = false;
  bool day_after_holiday = false;
  double precipitation_intensity = 0.0;
  double apparent_max_temperature = 0.0;

  double lag(int k) const;
  /// Predictor vector in kPredictorNames order.
  std::array<double, kNumPredictors> predictors() const;
};

struct Dataset {
  std::vector<FeatureRow> rows;
  /// Open days whose weather was carried forward from the previous record.
  std::vector<Date> weather_filled;
};

/// `daily` must hold exactly the open days of `cal` between its first and
/// last date. The first kMaxLag business days produce no row.
Dataset build_dataset(const DailySeries& daily, const BusinessCalendar& cal,
                      std::span<const WeatherRecord> weather);

/// Sample autocorrelation (global mean, denominator n) for lags 0..max_lag.
/// nullopt for a constant series.
std::optional<std::vector<double>> autocorrelation(std::span<const double> values, int max_lag);

struct SeriesStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> cov_pct;  // population sd / mean * 100; nullopt when mean == 0
  double zero_share_pct = 0.0;
};

SeriesStats series_stats(std::span<const double> values);
SeriesStats series_stats(const DailySeries& s);
SeriesStats series_stats(const HourlySeries& s);

std::vector<WeatherRecord> read_weather(std::istream& in);
std::vector<WeatherRecord> read_weather(const std::filesystem::path& path);
void write_weather(std::ostream& out, std::span<const WeatherRecord> weather);
void write_dataset(std::ostream& out, std::span<const FeatureRow> rows);

}  // namespace binwatch
