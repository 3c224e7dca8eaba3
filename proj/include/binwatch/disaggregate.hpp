#pragma once

// Daily-to-hourly mapping through per-weekday mean fraction-of-day profiles.

#include <array>
#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "binwatch/calendar.hpp"

namespace binwatch {

struct ProfileOptions {
  /// 0 uses every preceding same weekday; N > 0 only the most recent N
  /// qualifying days of that weekday.
  int window_days = 0;
};

class WeekdayHourProfile {
 public:
  WeekdayHourProfile() = default;
  WeekdayHourProfile(int open_hour, int hours_per_day) : open_hour_(open_hour), hours_per_day_(hours_per_day) {}

  int open_hour() const noexcept { return open_hour_; }
  int hours_per_day() const noexcept { return hours_per_day_; }
  bool has(int weekday) const { return weekday >= 1 && weekday <= 7 && fractions_[static_cast<std::size_t>(weekday)].has_value(); }
  /// Throws DataError naming the weekday when no profile exists.
  const std::vector<double>& fractions(int weekday) const;
  std::size_t days_used(int weekday) const { return days_used_.at(static_cast<std::size_t>(weekday)); }

  void set(int weekday, std::vector<double> fractions, std::size_t days_used);

 private:
  int open_hour_ = 0;
  int hours_per_day_ = 0;
  std::array<std::optional<std::vector<double>>, 8> fractions_{};  // ISO weekday index
  std::array<std::size_t, 8> days_used_{};
};

/// Accumulates fraction-of-day vectors day by day, so profiles can be
/// snapshotted causally while walking a series forward.
class ProfileAccumulator {
 public:
  ProfileAccumulator(int open_hour, int hours_per_day, ProfileOptions options = {});

  /// Days with a zero total are skipped (their fractions are undefined).
  void add_day(Date date, std::span<const std::int64_t> counts);
  WeekdayHourProfile snapshot() const;

 private:
  int open_hour_;
  int hours_per_day_;
  ProfileOptions options_;
  std::array<std::vector<double>, 8> sums_{};
  std::array<std::size_t, 8> counts_{};
  std::array<std::deque<std::vector<double>>, 8> recent_{};
};

/// Profiles from the days of `history` strictly before `as_of`. Throws
/// DataError if a weekday that occurs in `history` has no qualifying
/// (nonzero-total) day before `as_of`.
WeekdayHourProfile compute_profiles(const HourlySeries& history, Date as_of, ProfileOptions options = {});

/// hour h -> daily_forecast * fraction(weekday, h).
std::vector<double> disaggregate(double daily_forecast, int weekday, const WeekdayHourProfile& profile);

void write_profile(std::ostream& out, const WeekdayHourProfile& profile);

}  // namespace binwatch
