#include "binwatch/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"
#include "binwatch/rng.hpp"

namespace binwatch {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("synthetic: " + what);
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

int day_of_year(Date d) {
  const Date jan1{d.year(), std::chrono::January, std::chrono::day{1}};
  return days_between(jan1, d) + 1;
}

// Continuous truncated Pareto on [lo, hi).
double truncated_pareto(Random& rng, double lo, double hi, double alpha) {
  const double tail = 1.0 - std::pow(lo / hi, alpha);
  return lo * std::pow(1.0 - rng.uniform() * tail, -1.0 / alpha);
}

double truncated_pareto_mean(double lo, double hi, double alpha) {
  const double norm = 1.0 - std::pow(lo / hi, alpha);
  if (std::abs(alpha - 1.0) < 1e-12) return lo * std::log(hi / lo) / norm;
  return alpha / (alpha - 1.0) * std::pow(lo, alpha) * (std::pow(lo, 1.0 - alpha) - std::pow(hi, 1.0 - alpha)) / norm;
}

}  // namespace

void SyntheticConfig::validate() const {
  require(std::chrono::sys_days{window.first} <= std::chrono::sys_days{window.last}, "window start after end");
  require(open_hour >= 0 && open_hour < close_hour && close_hour <= 24, "invalid opening hours");
  require(base_daily_mean > 0.0, "base_daily_mean must be > 0");
  require(annual_trend_pct > -100.0, "annual_trend_pct must be > -100");
  for (double m : month_multipliers) require(m > 0.0, "month multipliers must be > 0");
  for (double m : weekday_multipliers) require(m > 0.0, "weekday multipliers must be > 0");
  require(holiday_adjacent_multiplier > 0.0, "holiday_adjacent_multiplier must be > 0");
  require(temp_noise_sd_c >= 0.0, "temp_noise_sd_c must be >= 0");
  require(precip_probability >= 0.0 && precip_probability <= 1.0, "precip_probability must be in [0, 1]");
  require(precip_mean_mm_h > 0.0, "precip_mean_mm_h must be > 0");
  require(latent_sd >= 0.0, "latent_sd must be >= 0");
  require(latent_phi > -1.0 && latent_phi < 1.0, "latent_phi must be in (-1, 1)");
  require(hourly_shape.size() == static_cast<std::size_t>(close_hour - open_hour),
          "hourly_shape needs one value per open hour (" + std::to_string(close_hour - open_hour) + ")");
  double sum = 0.0;
  for (double v : hourly_shape) {
    require(v >= 0.0, "hourly_shape values must be >= 0");
    sum += v;
  }
  require(sum > 0.0, "hourly_shape must not be all zero");
  require(zero_inflation >= 0.0 && zero_inflation <= 1.0, "zero_inflation must be in [0, 1]");
  require(hourly_dispersion > 0.0, "hourly_dispersion must be > 0");
  require(visit_mean_items >= 1.0, "visit_mean_items must be >= 1");
  require(bulk_probability >= 0.0 && bulk_probability <= 1.0, "bulk_probability must be in [0, 1]");
  require(bulk_min_items >= 1.0, "bulk_min_items must be >= 1");
  require(bulk_alpha > 0.0, "bulk_alpha must be > 0");
  require(static_cast<double>(bulk_max_items) >= bulk_min_items, "bulk_max_items must be >= bulk_min_items");
}

Date easter_sunday(int year) {
  const int a = year % 19;
  const int b = year / 100;
  const int c = year % 100;
  const int d = b / 4;
  const int e = b % 4;
  const int f = (b + 8) / 25;
  const int g = (b - f + 1) / 3;
  const int h = (19 * a + b - d - g + 15) % 30;
  const int i = c / 4;
  const int k = c % 4;
  const int l = (32 + 2 * e + 2 * i - h - k) % 7;
  const int m = (a + 11 * h + 22 * l) / 451;
  const int month = (h + l - 7 * m + 114) / 31;
  const int day = (h + l - 7 * m + 114) % 31 + 1;
  return Date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
              std::chrono::day{static_cast<unsigned>(day)}};
}

std::set<Date> norwegian_holidays(int first_year, int last_year) {
  using namespace std::chrono;
  std::set<Date> out;
  for (int y = first_year; y <= last_year; ++y) {
    const year yy{y};
    out.insert(Date{yy, January, day{1}});
    out.insert(Date{yy, May, day{1}});
    out.insert(Date{yy, May, day{17}});
    out.insert(Date{yy, December, day{25}});
    out.insert(Date{yy, December, day{26}});
    const Date easter = easter_sunday(y);
    for (int offset : {-3, -2, 0, 1, 39, 49, 50}) out.insert(add_days(easter, offset));
  }
  return out;
}

SyntheticData generate(const SyntheticConfig& cfg) {
  cfg.validate();
  Random rng(cfg.seed);
  SyntheticData out;

  const int first_year = static_cast<int>(cfg.window.first.year());
  const int last_year = static_cast<int>(cfg.window.last.year());
  for (const auto& d : norwegian_holidays(first_year, last_year + 1)) {
    if (std::chrono::sys_days{d} >= std::chrono::sys_days{cfg.window.first} &&
        std::chrono::sys_days{d} <= std::chrono::sys_days{cfg.window.last}) {
      out.holidays.insert(d);
    }
  }

  const int n_days = days_between(cfg.window.first, cfg.window.last) + 1;
  double temp_noise = rng.normal() * cfg.temp_noise_sd_c;
  constexpr double kTempPhi = 0.6;
  for (int i = 0; i < n_days; ++i) {
    const Date d = add_days(cfg.window.first, i);
    if (i > 0) temp_noise = kTempPhi * temp_noise + std::sqrt(1.0 - kTempPhi * kTempPhi) * cfg.temp_noise_sd_c * rng.normal();
    const double season =
        cfg.temp_amplitude_c * std::sin(2.0 * std::numbers::pi * (day_of_year(d) - 110) / 365.25);
    WeatherRecord w;
    w.date = d;
    w.apparent_max_temperature = round2(cfg.temp_mean_c + season + temp_noise);
    const bool wet = rng.bernoulli(cfg.precip_probability);
    constexpr double kPrecipShape = 0.8;
    const double amount = rng.gamma(kPrecipShape, cfg.precip_mean_mm_h / kPrecipShape);
    w.precipitation_intensity = wet ? round2(amount) : 0.0;
    out.weather.push_back(w);
  }

  const BusinessCalendar cal(cfg.open_hour, cfg.close_hour, {7}, out.holidays);
  const auto open_days = cal.open_days(cfg.window);
  if (open_days.empty()) throw ConfigError("synthetic: window contains no open day");

  const double mid = 0.5 * static_cast<double>(n_days - 1);
  std::vector<double> multiplier(open_days.size());
  for (std::size_t k = 0; k < open_days.size(); ++k) {
    const Date d = open_days[k];
    const int offset = days_between(cfg.window.first, d);
    const auto& w = out.weather[static_cast<std::size_t>(offset)];
    double m = std::pow(1.0 + cfg.annual_trend_pct / 100.0, (offset - mid) / 365.0);
    m *= cfg.month_multipliers[static_cast<unsigned>(d.month()) - 1];
    m *= cfg.weekday_multipliers[static_cast<std::size_t>(iso_weekday(d) - 1)];
    if (out.holidays.contains(add_days(d, 1))) m *= cfg.holiday_adjacent_multiplier;
    m *= std::exp(cfg.temperature_coefficient * (w.apparent_max_temperature - cfg.temp_mean_c) -
                  cfg.precipitation_coefficient * w.precipitation_intensity);
    multiplier[k] = m;
  }

  const int hours = cfg.close_hour - cfg.open_hour;
  double shape_sum = 0.0;
  for (double v : cfg.hourly_shape) shape_sum += v;
  const double bulk_hi = static_cast<double>(cfg.bulk_max_items) + 1.0;
  const double bulk_mean = truncated_pareto_mean(cfg.bulk_min_items, bulk_hi, cfg.bulk_alpha) - 0.5;
  const double keep = 1.0 - cfg.zero_inflation;
  double mean_multiplier = 0.0;
  for (double m : multiplier) mean_multiplier += m;
  mean_multiplier /= static_cast<double>(multiplier.size());
  double scale = 0.0;
  if (keep > 0.0) {
    scale = (cfg.base_daily_mean / keep - hours * cfg.bulk_probability * bulk_mean) /
            (cfg.base_daily_mean * mean_multiplier);
    if (scale <= 0.0) throw ConfigError("synthetic: expected bulk volume exceeds base_daily_mean");
  }

  double latent = rng.normal() * cfg.latent_sd;
  for (std::size_t k = 0; k < open_days.size(); ++k) {
    if (k > 0) {
      latent = cfg.latent_phi * latent +
               std::sqrt(1.0 - cfg.latent_phi * cfg.latent_phi) * cfg.latent_sd * rng.normal();
    }
    const double factor = std::exp(latent - 0.5 * cfg.latent_sd * cfg.latent_sd);
    const double day_mean = scale * cfg.base_daily_mean * multiplier[k] * factor;
    for (int h = 0; h < hours; ++h) {
      if (rng.bernoulli(cfg.zero_inflation)) continue;
      const DateTime slot{open_days[k], cfg.open_hour + h, 0};
      const double mu = day_mean * cfg.hourly_shape[static_cast<std::size_t>(h)] / shape_sum;
      std::int64_t remaining = mu > 0.0 ? rng.negative_binomial(mu, cfg.hourly_dispersion) : 0;
      while (remaining > 0) {
        std::int64_t visit = 1 + rng.poisson(cfg.visit_mean_items - 1.0);
        visit = std::min(visit, remaining);
        remaining -= visit;
        out.events.push_back({{slot.date, slot.hour, static_cast<int>(rng.index(60))}, visit});
      }
      if (rng.bernoulli(cfg.bulk_probability)) {
        const double x = truncated_pareto(rng, cfg.bulk_min_items, bulk_hi, cfg.bulk_alpha);
        const auto size = std::min(static_cast<std::int64_t>(x), cfg.bulk_max_items);
        out.events.push_back({{slot.date, slot.hour, static_cast<int>(rng.index(60))}, size});
      }
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const ReturnEvent& a, const ReturnEvent& b) { return a.timestamp < b.timestamp; });
  return out;
}

bool CalibrationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CalibrationCheck& c) { return c.pass; });
}

CalibrationReport calibration_report(std::span<const ReturnEvent> events, const BusinessCalendar& cal,
                                     const Window& window, const CalibrationTargets& t) {
  CalibrationReport r;
  const double tol = t.daily_mean * t.daily_mean_tolerance_pct / 100.0;
  r.checks = {{"daily_mean", std::nullopt, t.daily_mean - tol, t.daily_mean + tol, false},
              {"daily_cov_pct", std::nullopt, t.daily_cov_min, t.daily_cov_max, false},
              {"hourly_cov_pct", std::nullopt, t.hourly_cov_min, t.hourly_cov_max, false},
              {"hourly_zero_share_pct", std::nullopt, t.zero_share_min, t.zero_share_max, false},
              {"saturday_uplift_pct", std::nullopt, t.saturday_uplift_min_pct, 1e300, false}};
  if (events.empty()) return r;

  const auto agg = aggregate_hourly(events, cal, window);
  const auto daily = aggregate_daily(agg.series);
  if (daily.values.empty()) return r;
  const auto ds = series_stats(daily);
  const auto hs = series_stats(agg.series);
  r.checks[0].measured = ds.mean;
  r.checks[1].measured = ds.cov_pct;
  r.checks[2].measured = hs.cov_pct;
  r.checks[3].measured = hs.zero_share_pct;

  std::array<double, 8> sum{};
  std::array<std::size_t, 8> n{};
  for (std::size_t i = 0; i < daily.size(); ++i) {
    const auto wd = static_cast<std::size_t>(iso_weekday(daily.dates[i]));
    sum[wd] += daily.values[i];
    ++n[wd];
  }
  double best_other = -1.0;
  for (std::size_t wd = 1; wd <= 7; ++wd) {
    if (wd == 6 || n[wd] == 0) continue;
    best_other = std::max(best_other, sum[wd] / static_cast<double>(n[wd]));
  }
  if (n[6] > 0 && best_other > 0.0) {
    r.checks[4].measured = (sum[6] / static_cast<double>(n[6]) / best_other - 1.0) * 100.0;
  }

  for (auto& c : r.checks) c.pass = c.measured && *c.measured >= c.lo && *c.measured <= c.hi;
  return r;
}

nlohmann::json to_json(const CalibrationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j{{"name", c.name}, {"lo", c.lo}, {"pass", c.pass}};
    j["hi"] = c.hi < 1e300 ? nlohmann::json(c.hi) : nlohmann::json(nullptr);
    j["measured"] = c.measured ? nlohmann::json(*c.measured) : nlohmann::json("no data");
    checks.push_back(std::move(j));
  }
  return {{"all_pass", r.all_pass()}, {"checks", checks}};
}

void print(std::ostream& out, const CalibrationReport& r) {
  for (const auto& c : r.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " = "
        << (c.measured ? csv::format_fixed(*c.measured, 2) : std::string("no data")) << " (band "
        << csv::format_fixed(c.lo, 2) << " .. " << (c.hi < 1e300 ? csv::format_fixed(c.hi, 2) : std::string("inf"))
        << ")\n";
  }
}

}  // namespace binwatch
