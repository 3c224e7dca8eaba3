#pragma once

// Synthetic return-event streams with weather and holidays, plus the
// calibration report that checks their summary statistics against bands.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "binwatch/calendar.hpp"
#include "binwatch/dataset.hpp"

namespace binwatch {

struct SyntheticConfig {
  std::uint64_t seed = 42;
  Window window{Date{std::chrono::year{2014}, std::chrono::June, std::chrono::day{12}},
                Date{std::chrono::year{2017}, std::chrono::May, std::chrono::day{29}}};
  int open_hour = 8;
  int close_hour = 21;

  double base_daily_mean = 512.0;  // expected items per open day over the window
  double annual_trend_pct = 10.0;  // multiplicative growth per 365 days
  std::array<double, 12> month_multipliers{0.86, 0.84, 0.92, 0.98, 1.08, 1.22,
                                           1.02, 1.20, 1.05, 0.95, 0.90, 1.00};
  std::array<double, 6> weekday_multipliers{0.92, 0.90, 0.92, 0.95, 1.05, 1.40};  // Mon..Sat
  double holiday_adjacent_multiplier = 1.5;  // day before a holiday

  // Apparent maximum temperature: annual sine plus AR(1) noise.
  double temp_mean_c = 7.0;
  double temp_amplitude_c = 10.0;
  double temp_noise_sd_c = 3.0;
  double precip_probability = 0.45;
  double precip_mean_mm_h = 0.6;
  double temperature_coefficient = 0.012;   // log-intensity per degree C above temp_mean_c
  double precipitation_coefficient = 0.08;  // log-intensity per mm/h

  double latent_sd = 0.12;   // daily lognormal AR(1) factor
  double latent_phi = 0.45;

  // Intraday mean fractions, one per open hour; normalized on use.
  std::vector<double> hourly_shape{0.010, 0.025, 0.050, 0.075, 0.090, 0.095, 0.100,
                                   0.110, 0.125, 0.130, 0.105, 0.055, 0.030};
  double zero_inflation = 0.15;
  double hourly_dispersion = 2.0;  // negative binomial size parameter
  double visit_mean_items = 8.0;

  double bulk_probability = 0.02;  // per non-empty open hour
  double bulk_min_items = 30.0;
  double bulk_alpha = 1.6;         // truncated Pareto tail index
  std::int64_t bulk_max_items = 285;

  /// ConfigError on any violated invariant.
  void validate() const;
};

struct SyntheticData {
  std::vector<ReturnEvent> events;
  std::vector<WeatherRecord> weather;  // every calendar day of the window
  std::set<Date> holidays;             // within the window
};

/// Norwegian public holidays between two years inclusive.
std::set<Date> norwegian_holidays(int first_year, int last_year);
/// Gregorian Easter Sunday.
Date easter_sunday(int year);

SyntheticData generate(const SyntheticConfig& cfg);

struct CalibrationTargets {
  double daily_mean = 512.0;
  double daily_mean_tolerance_pct = 10.0;
  double daily_cov_min = 35.0;
  double daily_cov_max = 55.0;
  double hourly_cov_min = 100.0;
  double hourly_cov_max = 150.0;
  double zero_share_min = 12.0;
  double zero_share_max = 22.0;
  double saturday_uplift_min_pct = 10.0;  // over the highest other weekday mean
};

struct CalibrationCheck {
  std::string name;
  std::optional<double> measured;  // nullopt: no data
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct CalibrationReport {
  std::vector<CalibrationCheck> checks;
  bool all_pass() const;
};

CalibrationReport calibration_report(std::span<const ReturnEvent> events, const BusinessCalendar& cal,
                                     const Window& window, const CalibrationTargets& targets = {});

nlohmann::json to_json(const CalibrationReport& r);
void print(std::ostream& out, const CalibrationReport& r);

}  // namespace binwatch
