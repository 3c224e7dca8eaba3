#pragma once

// Benchmark forecasters that need no training. `history` is a gap-free
// business-day series; only entries strictly before `date` are used.

#include "binwatch/calendar.hpp"

namespace binwatch {

/// Business-day period of a week when one weekday is closed.
inline constexpr int kWeekPeriod = 6;

/// Value of the business day immediately preceding `date`.
double naive_forecast(const DailySeries& history, Date date);

/// Value `period` business days before `date`.
double seasonal_naive_forecast(const DailySeries& history, Date date, int period);

/// Mean of the values 1..weeks periods (of `period` business days) before `date`.
double seasonal_moving_average(const DailySeries& history, Date date, int weeks,
                               int period = kWeekPeriod);

}  // namespace binwatch
