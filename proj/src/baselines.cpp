#include "binwatch/baselines.hpp"

#include <algorithm>

#include "binwatch/error.hpp"

namespace binwatch {

namespace {

// Number of history entries strictly before `date`.
std::size_t prior_count(const DailySeries& history, Date date) {
  const auto it = std::lower_bound(history.dates.begin(), history.dates.end(), date, [](Date a, Date b) {
    return std::chrono::sys_days{a} < std::chrono::sys_days{b};
  });
  return static_cast<std::size_t>(it - history.dates.begin());
}

void require(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw DataError(std::string(what) + ": insufficient history (" + std::to_string(have) +
                    " prior business days, need " + std::to_string(need) + ")");
  }
}

}  // namespace

double naive_forecast(const DailySeries& history, Date date) {
  const auto k = prior_count(history, date);
  require(k, 1, "naive forecast");
  return history.values[k - 1];
}

double seasonal_naive_forecast(const DailySeries& history, Date date, int period) {
  if (period < 1) throw ConfigError("seasonal naive: period must be >= 1");
  const auto k = prior_count(history, date);
  const auto m = static_cast<std::size_t>(period);
  require(k, m, "seasonal naive forecast");
  return history.values[k - m];
}

double seasonal_moving_average(const DailySeries& history, Date date, int weeks, int period) {
  if (weeks < 1) throw ConfigError("seasonal moving average: window must be >= 1 week");
  if (period < 1) throw ConfigError("seasonal moving average: period must be >= 1");
  const auto k = prior_count(history, date);
  const auto m = static_cast<std::size_t>(period);
  require(k, m * static_cast<std::size_t>(weeks), "seasonal moving average");
  double sum = 0.0;
  for (std::size_t w = 1; w <= static_cast<std::size_t>(weeks); ++w) sum += history.values[k - w * m];
  return sum / weeks;
}

}  // namespace binwatch
