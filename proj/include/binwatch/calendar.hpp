#pragma once

// Business-calendar grid and aggregation of raw return events onto it.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace binwatch {

using Date = std::chrono::year_month_day;

/// Naive local date-time with minute resolution. No time zone, no DST.
struct DateTime {
  Date date;
  int hour = 0;
  int minute = 0;

  friend auto operator<=>(const DateTime&, const DateTime&) = default;
};

Date parse_date(std::string_view text);                // YYYY-MM-DD
DateTime parse_datetime(std::string_view text);        // YYYY-MM-DDTHH:MM
std::string format_date(Date d);
std::string format_datetime(const DateTime& t);
Date add_days(Date d, int n);
int days_between(Date from, Date to);                  // to - from
/// ISO weekday: Monday = 1 ... Sunday = 7.
int iso_weekday(Date d);

struct ReturnEvent {
  DateTime timestamp;
  std::int64_t items = 0;
};

/// Inclusive date range.
struct Window {
  Date first;
  Date last;
};

class BusinessCalendar {
 public:
  /// Store open during [open_hour, close_hour) on every weekday not in
  /// `closed_weekdays` (ISO numbering) and not listed in `holidays`.
  BusinessCalendar(int open_hour = 8, int close_hour = 21,
                   std::set<int> closed_weekdays = {7},
                   std::set<Date> holidays = {});

  int open_hour() const noexcept { return open_hour_; }
  int close_hour() const noexcept { return close_hour_; }
  int hours_per_day() const noexcept { return close_hour_ - open_hour_; }
  const std::set<int>& closed_weekdays() const noexcept { return closed_weekdays_; }
  const std::set<Date>& holidays() const noexcept { return holidays_; }

  bool is_holiday(Date d) const { return holidays_.contains(d); }
  bool is_open_weekday(int iso_wd) const { return !closed_weekdays_.contains(iso_wd); }
  bool is_open_day(Date d) const;
  bool is_open_hour(int hour) const noexcept { return hour >= open_hour_ && hour < close_hour_; }

  /// Open ISO weekdays in ascending order.
  std::vector<int> open_weekdays() const;
  std::vector<Date> open_days(const Window& w) const;

  BusinessCalendar with_holidays(std::set<Date> holidays) const;

 private:
  int open_hour_;
  int close_hour_;
  std::set<int> closed_weekdays_;
  std::set<Date> holidays_;
};

/// Gap-free hourly counts over the open hours of the open days of a window.
/// Slot i covers hour `open_hour + i % hours_per_day` of `days[i / hours_per_day]`.
struct HourlySeries {
  int open_hour = 0;
  int hours_per_day = 0;
  std::vector<Date> days;
  std::vector<std::int64_t> counts;

  std::size_t size() const noexcept { return counts.size(); }
  std::span<const std::int64_t> day(std::size_t i) const {
    return {counts.data() + i * static_cast<std::size_t>(hours_per_day),
            static_cast<std::size_t>(hours_per_day)};
  }
  DateTime slot_time(std::size_t slot) const;
};

/// One value per open day, in date order.
struct DailySeries {
  std::vector<Date> dates;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Items that could not be placed in their own hour slot.
struct OutOfHoursLog {
  std::int64_t reattributed_items = 0;  // moved to the next open hour
  std::int64_t reattributed_events = 0;
  std::int64_t unplaced_items = 0;      // no open hour left in the window
  std::int64_t unplaced_events = 0;
};

struct HourlyAggregate {
  HourlySeries series;
  OutOfHoursLog log;
};

std::vector<ReturnEvent> ingest_events(std::istream& in);
std::vector<ReturnEvent> ingest_events(const std::filesystem::path& path);
void write_events(std::ostream& out, std::span<const ReturnEvent> events);

/// Events in closed hours or days go to the nearest following open hour;
/// events with no following open hour inside the window (or before the window
/// start) are counted in `log.unplaced_*`. Items are conserved exactly.
HourlyAggregate aggregate_hourly(std::span<const ReturnEvent> events,
                                 const BusinessCalendar& cal, const Window& window);

DailySeries aggregate_daily(const HourlySeries& hourly);

std::set<Date> read_holidays(std::istream& in);
std::set<Date> read_holidays(const std::filesystem::path& path);
void write_holidays(std::ostream& out, const std::set<Date>& holidays);

}  // namespace binwatch
