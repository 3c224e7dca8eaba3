#include "binwatch/disaggregate.hpp"

#include <ostream>
#include <set>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

namespace binwatch {

namespace {

const char* weekday_name(int wd) {
  static constexpr const char* kNames[] = {"?", "Monday", "Tuesday", "Wednesday", "Thursday",
                                           "Friday", "Saturday", "Sunday"};
  return wd >= 1 && wd <= 7 ? kNames[wd] : kNames[0];
}

}  // namespace

const std::vector<double>& WeekdayHourProfile::fractions(int weekday) const {
  if (!has(weekday)) throw DataError(std::string("no hourly profile for ") + weekday_name(weekday));
  return *fractions_[static_cast<std::size_t>(weekday)];
}

void WeekdayHourProfile::set(int weekday, std::vector<double> fractions, std::size_t days_used) {
  fractions_.at(static_cast<std::size_t>(weekday)) = std::move(fractions);
  days_used_.at(static_cast<std::size_t>(weekday)) = days_used;
}

ProfileAccumulator::ProfileAccumulator(int open_hour, int hours_per_day, ProfileOptions options)
    : open_hour_(open_hour), hours_per_day_(hours_per_day), options_(options) {
  if (options_.window_days < 0) throw ConfigError("profile window must be >= 0");
  for (auto& s : sums_) s.assign(static_cast<std::size_t>(hours_per_day_), 0.0);
}

void ProfileAccumulator::add_day(Date date, std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return;
  const auto wd = static_cast<std::size_t>(iso_weekday(date));
  std::vector<double> frac(counts.size());
  for (std::size_t h = 0; h < counts.size(); ++h)
    frac[h] = static_cast<double>(counts[h]) / static_cast<double>(total);

  if (options_.window_days == 0) {
    for (std::size_t h = 0; h < frac.size(); ++h) sums_[wd][h] += frac[h];
    ++counts_[wd];
  } else {
    recent_[wd].push_back(std::move(frac));
    if (recent_[wd].size() > static_cast<std::size_t>(options_.window_days)) recent_[wd].pop_front();
  }
}

WeekdayHourProfile ProfileAccumulator::snapshot() const {
  WeekdayHourProfile p(open_hour_, hours_per_day_);
  for (int wd = 1; wd <= 7; ++wd) {
    const auto w = static_cast<std::size_t>(wd);
    std::vector<double> mean(static_cast<std::size_t>(hours_per_day_), 0.0);
    std::size_t n = 0;
    if (options_.window_days == 0) {
      n = counts_[w];
      mean = sums_[w];
    } else {
      n = recent_[w].size();
      for (const auto& f : recent_[w])
        for (std::size_t h = 0; h < f.size(); ++h) mean[h] += f[h];
    }
    if (n == 0) continue;
    for (auto& v : mean) v /= static_cast<double>(n);
    p.set(wd, std::move(mean), n);
  }
  return p;
}

WeekdayHourProfile compute_profiles(const HourlySeries& history, Date as_of, ProfileOptions options) {
  ProfileAccumulator acc(history.open_hour, history.hours_per_day, options);
  std::set<int> weekdays;
  for (std::size_t i = 0; i < history.days.size(); ++i) {
    weekdays.insert(iso_weekday(history.days[i]));
    if (std::chrono::sys_days{history.days[i]} < std::chrono::sys_days{as_of}) acc.add_day(history.days[i], history.day(i));
  }
  auto p = acc.snapshot();
  for (int wd : weekdays) {
    if (!p.has(wd)) {
      throw DataError(std::string("no ") + weekday_name(wd) + " with nonzero returns before " + format_date(as_of));
    }
  }
  return p;
}

std::vector<double> disaggregate(double daily_forecast, int weekday, const WeekdayHourProfile& profile) {
  const auto& f = profile.fractions(weekday);
  std::vector<double> out(f.size());
  for (std::size_t h = 0; h < f.size(); ++h) out[h] = daily_forecast * f[h];
  return out;
}

void write_profile(std::ostream& out, const WeekdayHourProfile& profile) {
  out << "weekday,hour,fraction\n";
  for (int wd = 1; wd <= 7; ++wd) {
    if (!profile.has(wd)) continue;
    const auto& f = profile.fractions(wd);
    for (std::size_t h = 0; h < f.size(); ++h)
      out << wd << ',' << profile.open_hour() + static_cast<int>(h) << ',' << csv::format_double(f[h]) << '\n';
  }
}

}  // namespace binwatch
