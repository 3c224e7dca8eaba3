#include "binwatch/calendar.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

namespace binwatch {

namespace {

using std::chrono::sys_days;

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

Date checked_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_fixed(text, 0, 4, y) ||
      !parse_fixed(text, 5, 2, m) || !parse_fixed(text, 8, 2, d)) {
    throw DataError("bad date '" + std::string(text) + "' (want YYYY-MM-DD)");
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
  return date;
}

}  // namespace

Date parse_date(std::string_view text) { return checked_date(text); }

DateTime parse_datetime(std::string_view text) {
  if (text.size() != 16 || text[10] != 'T' || text[13] != ':') {
    throw DataError("bad timestamp '" + std::string(text) + "' (want YYYY-MM-DDTHH:MM)");
  }
  DateTime t;
  t.date = checked_date(text.substr(0, 10));
  if (!parse_fixed(text, 11, 2, t.hour) || !parse_fixed(text, 14, 2, t.minute) || t.hour > 23 ||
      t.minute > 59) {
    throw DataError("bad time of day in '" + std::string(text) + "'");
  }
  return t;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::string format_datetime(const DateTime& t) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "T%02d:%02d", t.hour, t.minute);
  return format_date(t.date) + buf;
}

Date add_days(Date d, int n) { return Date{sys_days{d} + std::chrono::days{n}}; }

int days_between(Date from, Date to) {
  return static_cast<int>((sys_days{to} - sys_days{from}).count());
}

int iso_weekday(Date d) { return static_cast<int>(std::chrono::weekday{sys_days{d}}.iso_encoding()); }

BusinessCalendar::BusinessCalendar(int open_hour, int close_hour, std::set<int> closed_weekdays,
                                   std::set<Date> holidays)
    : open_hour_(open_hour),
      close_hour_(close_hour),
      closed_weekdays_(std::move(closed_weekdays)),
      holidays_(std::move(holidays)) {
  if (open_hour_ < 0 || close_hour_ > 24 || open_hour_ >= close_hour_) {
    throw ConfigError("calendar: need 0 <= open_hour < close_hour <= 24");
  }
  for (int wd : closed_weekdays_) {
    if (wd < 1 || wd > 7) throw ConfigError("calendar: weekday must be in 1..7");
  }
  if (closed_weekdays_.size() >= 7) throw ConfigError("calendar: at least one weekday must be open");
}

bool BusinessCalendar::is_open_day(Date d) const {
  return is_open_weekday(iso_weekday(d)) && !is_holiday(d);
}

std::vector<int> BusinessCalendar::open_weekdays() const {
  std::vector<int> out;
  for (int wd = 1; wd <= 7; ++wd)
    if (is_open_weekday(wd)) out.push_back(wd);
  return out;
}

std::vector<Date> BusinessCalendar::open_days(const Window& w) const {
  std::vector<Date> out;
  for (Date d = w.first; sys_days{d} <= sys_days{w.last}; d = add_days(d, 1))
    if (is_open_day(d)) out.push_back(d);
  return out;
}

BusinessCalendar BusinessCalendar::with_holidays(std::set<Date> holidays) const {
  return BusinessCalendar(open_hour_, close_hour_, closed_weekdays_, std::move(holidays));
}

DateTime HourlySeries::slot_time(std::size_t slot) const {
  const auto h = static_cast<std::size_t>(hours_per_day);
  return {days.at(slot / h), open_hour + static_cast<int>(slot % h), 0};
}

std::vector<ReturnEvent> ingest_events(std::istream& in) {
  std::string line;
  if (!csv::read_line(in, line)) throw DataError("events: empty file");
  if (line != "timestamp,items") throw ParseError(1, "events: expected header 'timestamp,items'");
  std::vector<ReturnEvent> events;
  std::size_t row = 1;
  while (csv::read_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 2) throw ParseError(row, "events: expected 2 columns");
    ReturnEvent ev;
    try {
      ev.timestamp = parse_datetime(fields[0]);
    } catch (const DataError& e) {
      throw ParseError(row, e.what());
    }
    const auto items = csv::parse_int(fields[1]);
    if (!items || fields[1].front() == '-' || fields[1].front() == '+') {
      throw ParseError(row, "events: items must be a base-10 unsigned integer");
    }
    if (*items < 1) throw ParseError(row, "events: items must be >= 1");
    ev.items = *items;
    events.push_back(ev);
  }
  if (events.empty()) throw DataError("events: file has no data rows");
  std::stable_sort(events.begin(), events.end(),
                   [](const ReturnEvent& a, const ReturnEvent& b) { return a.timestamp < b.timestamp; });
  return events;
}

std::vector<ReturnEvent> ingest_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open events file " + path.string());
  return ingest_events(in);
}

void write_events(std::ostream& out, std::span<const ReturnEvent> events) {
  out << "timestamp,items\n";
  for (const auto& ev : events) out << format_datetime(ev.timestamp) << ',' << ev.items << '\n';
}

HourlyAggregate aggregate_hourly(std::span<const ReturnEvent> events, const BusinessCalendar& cal,
                                 const Window& window) {
  HourlyAggregate agg;
  auto& s = agg.series;
  s.open_hour = cal.open_hour();
  s.hours_per_day = cal.hours_per_day();
  s.days = cal.open_days(window);
  s.counts.assign(s.days.size() * static_cast<std::size_t>(s.hours_per_day), 0);

  const auto first = sys_days{window.first};
  const auto last = sys_days{window.last};
  for (const auto& ev : events) {
    const auto day = sys_days{ev.timestamp.date};
    if (day < first || day > last) {
      agg.log.unplaced_items += ev.items;
      ++agg.log.unplaced_events;
      continue;
    }
    // First open slot at or after the event's hour.
    const auto it = std::lower_bound(s.days.begin(), s.days.end(), ev.timestamp.date,
                                     [](Date a, Date b) { return sys_days{a} < sys_days{b}; });
    auto day_idx = static_cast<std::size_t>(it - s.days.begin());
    int hour_idx = 0;
    bool moved = false;
    if (it != s.days.end() && *it == ev.timestamp.date) {
      hour_idx = std::max(ev.timestamp.hour - s.open_hour, 0);
      moved = ev.timestamp.hour < s.open_hour;
      if (hour_idx >= s.hours_per_day) {
        ++day_idx;
        hour_idx = 0;
        moved = true;
      }
    } else {
      moved = true;
    }
    if (day_idx >= s.days.size()) {
      agg.log.unplaced_items += ev.items;
      ++agg.log.unplaced_events;
      continue;
    }
    s.counts[day_idx * static_cast<std::size_t>(s.hours_per_day) + static_cast<std::size_t>(hour_idx)] +=
        ev.items;
    if (moved) {
      agg.log.reattributed_items += ev.items;
      ++agg.log.reattributed_events;
    }
  }
  return agg;
}

DailySeries aggregate_daily(const HourlySeries& hourly) {
  DailySeries d;
  d.dates = hourly.days;
  d.values.reserve(hourly.days.size());
  for (std::size_t i = 0; i < hourly.days.size(); ++i) {
    std::int64_t total = 0;
    for (auto c : hourly.day(i)) total += c;
    d.values.push_back(static_cast<double>(total));
  }
  return d;
}

std::set<Date> read_holidays(std::istream& in) {
  std::string line;
  if (!csv::read_line(in, line)) throw DataError("holidays: empty file");
  if (line != "date") throw ParseError(1, "holidays: expected header 'date'");
  std::set<Date> out;
  std::size_t row = 1;
  while (csv::read_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    try {
      out.insert(parse_date(line));
    } catch (const DataError& e) {
      throw ParseError(row, e.what());
    }
  }
  return out;
}

std::set<Date> read_holidays(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open holidays file " + path.string());
  return read_holidays(in);
}

void write_holidays(std::ostream& out, const std::set<Date>& holidays) {
  out << "date\n";
  for (auto d : holidays) out << format_date(d) << '\n';
}

}  // namespace binwatch
