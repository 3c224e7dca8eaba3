#include "binwatch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

namespace binwatch {

namespace {

struct DateLess {
  bool operator()(Date a, Date b) const {
    return std::chrono::sys_days{a} < std::chrono::sys_days{b};
  }
};

}  // namespace

double FeatureRow::lag(int k) const {
  for (std::size_t i = 0; i < kLags.size(); ++i)
    if (kLags[i] == k) return lags[i];
  throw ConfigError("no lag " + std::to_string(k) + " in feature row");
}

std::array<double, kNumPredictors> FeatureRow::predictors() const {
  return {lags[0],
          lags[1],
          lags[2],
          lags[3],
          lags[4],
          lags[5],
          static_cast<double>(weekday),
          static_cast<double>(month),
          static_cast<double>(year),
          day_before_holiday ? 1.0 : 0.0,
          day_after_holiday ? 1.0 : 0.0,
          precipitation_intensity,
          apparent_max_temperature};
}

Dataset build_dataset(const DailySeries& daily, const BusinessCalendar& cal,
                      std::span<const WeatherRecord> weather) {
  if (daily.dates.size() != daily.values.size()) throw DataError("daily series: length mismatch");
  if (daily.size() < static_cast<std::size_t>(kMaxLag) + 1) {
    throw DataError("daily series covers " + std::to_string(daily.size()) +
                    " business days; need at least " + std::to_string(kMaxLag + 1));
  }
  const auto expected = cal.open_days({daily.dates.front(), daily.dates.back()});
  if (expected != daily.dates) {
    throw DataError("daily series is not gap-free on the business calendar");
  }

  std::map<Date, const WeatherRecord*, DateLess> by_date;
  for (const auto& w : weather) by_date[w.date] = &w;

  Dataset ds;
  ds.rows.reserve(daily.size() - kMaxLag);
  const WeatherRecord* carried = nullptr;
  for (std::size_t i = 0; i < daily.size(); ++i) {
    const Date d = daily.dates[i];
    const auto wit = by_date.find(d);
    if (wit != by_date.end()) {
      carried = wit->second;
    } else if (i >= static_cast<std::size_t>(kMaxLag)) {
      if (carried == nullptr) throw DataError("weather missing for first date " + format_date(d));
      ds.weather_filled.push_back(d);
    }
    if (i < static_cast<std::size_t>(kMaxLag)) continue;
    if (carried == nullptr) throw DataError("weather missing for first date " + format_date(d));

    FeatureRow r;
    r.date = d;
    r.target = daily.values[i];
    for (std::size_t l = 0; l < kLags.size(); ++l)
      r.lags[l] = daily.values[i - static_cast<std::size_t>(kLags[l])];
    r.weekday = iso_weekday(d);
    r.month = static_cast<int>(static_cast<unsigned>(d.month()));
    r.year = static_cast<int>(d.year());
    r.day_before_holiday = cal.is_holiday(add_days(d, 1));
    r.day_after_holiday = cal.is_holiday(add_days(d, -1));
    r.precipitation_intensity = carried->precipitation_intensity;
    r.apparent_max_temperature = carried->apparent_max_temperature;
    ds.rows.push_back(r);
  }
  return ds;
}

std::optional<std::vector<double>> autocorrelation(std::span<const double> values, int max_lag) {
  const auto n = values.size();
  if (max_lag < 0 || n <= static_cast<std::size_t>(max_lag)) {
    throw DataError("autocorrelation: series length must exceed max_lag");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : values) c0 += (v - mean) * (v - mean);
  if (c0 == 0.0) return std::nullopt;

  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1);
  r[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t)
      ck += (values[t] - mean) * (values[t - static_cast<std::size_t>(k)] - mean);
    r[static_cast<std::size_t>(k)] = ck / c0;
  }
  return r;
}

SeriesStats series_stats(std::span<const double> values) {
  if (values.empty()) throw DataError("series_stats: empty series");
  SeriesStats s;
  s.n = values.size();
  double sum = 0.0;
  std::size_t zeros = 0;
  for (double v : values) {
    sum += v;
    if (v == 0.0) ++zeros;
  }
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  if (s.mean != 0.0) s.cov_pct = std::sqrt(ss / static_cast<double>(s.n)) / s.mean * 100.0;
  s.zero_share_pct = static_cast<double>(zeros) / static_cast<double>(s.n) * 100.0;
  return s;
}

SeriesStats series_stats(const DailySeries& s) { return series_stats(std::span<const double>(s.values)); }

SeriesStats series_stats(const HourlySeries& s) {
  std::vector<double> v(s.counts.begin(), s.counts.end());
  return series_stats(std::span<const double>(v));
}

std::vector<WeatherRecord> read_weather(std::istream& in) {
  std::string line;
  if (!csv::read_line(in, line)) throw DataError("weather: empty file");
  if (line != "date,precip_mm_h,apparent_max_temp_c") {
    throw ParseError(1, "weather: expected header 'date,precip_mm_h,apparent_max_temp_c'");
  }
  std::vector<WeatherRecord> out;
  std::size_t row = 1;
  while (csv::read_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 3) throw ParseError(row, "weather: expected 3 columns");
    WeatherRecord w;
    try {
      w.date = parse_date(f[0]);
    } catch (const DataError& e) {
      throw ParseError(row, e.what());
    }
    const auto p = csv::parse_double(f[1]);
    const auto t = csv::parse_double(f[2]);
    if (!p || *p < 0.0) throw ParseError(row, "weather: precipitation must be a number >= 0");
    if (!t) throw ParseError(row, "weather: temperature must be a number");
    w.precipitation_intensity = *p;
    w.apparent_max_temperature = *t;
    out.push_back(w);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const WeatherRecord& a, const WeatherRecord& b) { return DateLess{}(a.date, b.date); });
  return out;
}

std::vector<WeatherRecord> read_weather(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weather file " + path.string());
  return read_weather(in);
}

void write_weather(std::ostream& out, std::span<const WeatherRecord> weather) {
  out << "date,precip_mm_h,apparent_max_temp_c\n";
  for (const auto& w : weather) {
    out << format_date(w.date) << ',' << csv::format_double(w.precipitation_intensity) << ','
        << csv::format_double(w.apparent_max_temperature) << '\n';
  }
}

void write_dataset(std::ostream& out, std::span<const FeatureRow> rows) {
  out << "date,target";
  for (auto name : kPredictorNames) out << ',' << name;
  out << '\n';
  for (const auto& r : rows) {
    out << format_date(r.date) << ',' << csv::format_double(r.target);
    for (double v : r.predictors()) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

}  // namespace binwatch
