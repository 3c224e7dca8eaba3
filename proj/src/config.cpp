#include "binwatch/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

#ifndef BINWATCH_VERSION
#define BINWATCH_VERSION "0.0.0"
#endif

namespace binwatch {

std::string_view version() { return BINWATCH_VERSION; }

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    auto item = trim(std::string_view(s).substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& expected, const std::string& got) {
  throw ConfigError("config key '" + key + "': expected " + expected + ", got '" + got + "'");
}

struct Field {
  std::string key;  // section.name
  std::function<void(const std::string&)> set;
  std::function<json()> get;
  std::function<std::string()> text;
  bool echo = true;
};

double to_double(const std::string& key, const std::string& v) {
  const auto d = csv::parse_double(trim(v));
  if (!d) bad_value(key, "a number", v);
  return *d;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  const auto i = csv::parse_int(trim(v));
  if (!i) bad_value(key, "an integer", v);
  return *i;
}

Field f_int(std::string key, int& x) {
  return {key, [&x, key](const std::string& v) { x = static_cast<int>(to_int(key, v)); }, [&x] { return json(x); },
          [&x] { return std::to_string(x); }};
}
Field f_i64(std::string key, std::int64_t& x) {
  return {key, [&x, key](const std::string& v) { x = to_int(key, v); }, [&x] { return json(x); },
          [&x] { return std::to_string(x); }};
}
Field f_size(std::string key, std::size_t& x) {
  return {key,
          [&x, key](const std::string& v) {
            const auto i = to_int(key, v);
            if (i < 0) bad_value(key, "a non-negative integer", v);
            x = static_cast<std::size_t>(i);
          },
          [&x] { return json(x); }, [&x] { return std::to_string(x); }};
}
Field f_u64(std::string key, std::uint64_t& x) {
  return {key,
          [&x, key](const std::string& v) {
            const auto t = trim(v);
            std::uint64_t out = 0;
            const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
            if (ec != std::errc{} || p != t.data() + t.size() || t.empty()) bad_value(key, "an unsigned integer", v);
            x = out;
          },
          [&x] { return json(x); }, [&x] { return std::to_string(x); }};
}
Field f_double(std::string key, double& x) {
  return {key, [&x, key](const std::string& v) { x = to_double(key, v); }, [&x] { return json(x); },
          [&x] { return csv::format_double(x); }};
}
Field f_bool(std::string key, bool& x) {
  return {key,
          [&x, key](const std::string& v) {
            const auto t = trim(v);
            if (t == "true" || t == "1" || t == "yes") x = true;
            else if (t == "false" || t == "0" || t == "no") x = false;
            else bad_value(key, "true or false", v);
          },
          [&x] { return json(x); }, [&x] { return std::string(x ? "true" : "false"); }};
}
Field f_string(std::string key, std::string& x) {
  return {key, [&x](const std::string& v) { x = trim(v); }, [&x] { return json(x); }, [&x] { return x; }};
}
Field f_list(std::string key, std::vector<std::string>& x) {
  return {key, [&x](const std::string& v) { x = split_list(v); }, [&x] { return json(x); }, [&x] { return join(x); }};
}
Field f_doubles(std::string key, std::vector<double>& x) {
  return {key,
          [&x, key](const std::string& v) {
            x.clear();
            for (const auto& item : split_list(v)) x.push_back(to_double(key, item));
          },
          [&x] { return json(x); },
          [&x] {
            std::vector<std::string> s;
            for (double d : x) s.push_back(csv::format_double(d));
            return join(s);
          }};
}
template <std::size_t N>
Field f_array(std::string key, std::array<double, N>& x) {
  return {key,
          [&x, key](const std::string& v) {
            const auto items = split_list(v);
            if (items.size() != N) bad_value(key, std::to_string(N) + " comma-separated numbers", v);
            for (std::size_t i = 0; i < N; ++i) x[i] = to_double(key, items[i]);
          },
          [&x] { return json(x); },
          [&x] {
            std::vector<std::string> s;
            for (double d : x) s.push_back(csv::format_double(d));
            return join(s);
          }};
}
Field f_int_set(std::string key, std::set<int>& x) {
  return {key,
          [&x, key](const std::string& v) {
            x.clear();
            for (const auto& item : split_list(v)) x.insert(static_cast<int>(to_int(key, item)));
          },
          [&x] { return json(x); },
          [&x] {
            std::vector<std::string> s;
            for (int d : x) s.push_back(std::to_string(d));
            return join(s);
          }};
}
Field f_date(std::string key, Date& x) {
  return {key,
          [&x, key](const std::string& v) {
            try {
              x = parse_date(trim(v));
            } catch (const std::exception&) {
              bad_value(key, "a date YYYY-MM-DD", v);
            }
          },
          [&x] { return json(format_date(x)); }, [&x] { return format_date(x); }};
}

std::vector<Field> fields(RunConfig& c) {
  auto& s = c.synthetic;
  auto& t = c.calibration;
  std::vector<Field> f{
      f_string("paths.events", c.paths.events),
      f_string("paths.weather", c.paths.weather),
      f_string("paths.holidays", c.paths.holidays),
      f_string("paths.output", c.paths.output),
      f_int("calendar.open_hour", c.open_hour),
      f_int("calendar.close_hour", c.close_hour),
      f_int_set("calendar.closed_weekdays", c.closed_weekdays),
      f_date("calendar.window_start", c.window.first),
      f_date("calendar.window_end", c.window.last),
      f_list("models.daily", c.daily_models),
      f_list("models.hourly", c.hourly_models),
      f_int("gbr.n_stages", c.gbr.n_stages),
      f_double("gbr.shrinkage", c.gbr.shrinkage),
      f_int("gbr.max_depth", c.gbr.max_depth),
      f_size("gbr.min_samples_leaf", c.gbr.min_samples_leaf),
      f_int("cv.k", c.cv_k),
      f_u64("cv.seed", c.cv_seed),
      f_bool("cv.parallel", c.parallel),
      f_int("disaggregation.window_days", c.profile.window_days),
      f_i64("bin.headroom_items", c.bin.headroom_items),
      f_double("bin.notification_threshold", c.bin.notification_threshold),
      f_i64("bin.full_capacity_items", c.bin.full_capacity_items),
      f_list("policies.list", c.policies),
      f_u64("synthetic.seed", s.seed),
      f_double("synthetic.base_daily_mean", s.base_daily_mean),
      f_double("synthetic.annual_trend_pct", s.annual_trend_pct),
      f_array("synthetic.month_multipliers", s.month_multipliers),
      f_array("synthetic.weekday_multipliers", s.weekday_multipliers),
      f_double("synthetic.holiday_adjacent_multiplier", s.holiday_adjacent_multiplier),
      f_double("synthetic.temp_mean_c", s.temp_mean_c),
      f_double("synthetic.temp_amplitude_c", s.temp_amplitude_c),
      f_double("synthetic.temp_noise_sd_c", s.temp_noise_sd_c),
      f_double("synthetic.precip_probability", s.precip_probability),
      f_double("synthetic.precip_mean_mm_h", s.precip_mean_mm_h),
      f_double("synthetic.temperature_coefficient", s.temperature_coefficient),
      f_double("synthetic.precipitation_coefficient", s.precipitation_coefficient),
      f_double("synthetic.latent_sd", s.latent_sd),
      f_double("synthetic.latent_phi", s.latent_phi),
      f_doubles("synthetic.hourly_shape", s.hourly_shape),
      f_double("synthetic.zero_inflation", s.zero_inflation),
      f_double("synthetic.hourly_dispersion", s.hourly_dispersion),
      f_double("synthetic.visit_mean_items", s.visit_mean_items),
      f_double("synthetic.bulk_probability", s.bulk_probability),
      f_double("synthetic.bulk_min_items", s.bulk_min_items),
      f_double("synthetic.bulk_alpha", s.bulk_alpha),
      f_i64("synthetic.bulk_max_items", s.bulk_max_items),
      f_bool("calibration.enforce", c.enforce_calibration),
      f_double("calibration.daily_mean", t.daily_mean),
      f_double("calibration.daily_mean_tolerance_pct", t.daily_mean_tolerance_pct),
      f_double("calibration.daily_cov_min", t.daily_cov_min),
      f_double("calibration.daily_cov_max", t.daily_cov_max),
      f_double("calibration.hourly_cov_min", t.hourly_cov_min),
      f_double("calibration.hourly_cov_max", t.hourly_cov_max),
      f_double("calibration.zero_share_min", t.zero_share_min),
      f_double("calibration.zero_share_max", t.zero_share_max),
      f_double("calibration.saturday_uplift_min_pct", t.saturday_uplift_min_pct),
  };
  for (auto& x : f) {
    // Where files land and how many threads run never change a result.
    if (x.key == "paths.output" || x.key == "cv.parallel") x.echo = false;
  }
  return f;
}

std::vector<ModelSpec> parse_models(const std::vector<std::string>& tokens, const GradientBoostingParams& gbr,
                                    const std::string& key) {
  if (tokens.empty()) throw ConfigError("config key '" + key + "': model list is empty");
  std::vector<ModelSpec> out;
  for (const auto& t : tokens) {
    try {
      out.push_back(parse_model_spec(t, gbr));
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  try {
    BusinessCalendar(open_hour, close_hour, closed_weekdays);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[calendar] ") + e.what());
  }
  if (std::chrono::sys_days{window.first} > std::chrono::sys_days{window.last}) {
    throw ConfigError("config key 'calendar.window_end': before window_start");
  }
  if (cv_k < 2) throw ConfigError("config key 'cv.k': must be >= 2");
  if (profile.window_days < 0) throw ConfigError("config key 'disaggregation.window_days': must be >= 0");
  try {
    gbr.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[gbr] ") + e.what());
  }
  daily_specs();
  hourly_specs();
  try {
    bin.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[bin] ") + e.what());
  }
  for (const auto& p : policy_specs()) validate_policy_against(p);
  synthetic_config().validate();
}

void RunConfig::validate_policy_against(const PolicySpec& p) const {
  try {
    binwatch::validate(p, bin);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config key 'policies.list': ") + e.what());
  }
  const auto* f = std::get_if<policy::ForecastBased>(&p);
  if (f == nullptr) return;
  for (const auto& s : hourly_specs())
    if (model_key(s) == f->source) return;
  throw ConfigError("config key 'policies.list': forecast source '" + f->source +
                    "' is not listed in models.hourly");
}

void RunConfig::apply_seed(std::uint64_t seed) {
  cv_seed = seed;
  synthetic.seed = seed;
}

BusinessCalendar RunConfig::calendar(std::set<Date> holidays) const {
  return BusinessCalendar(open_hour, close_hour, closed_weekdays, std::move(holidays));
}

SyntheticConfig RunConfig::synthetic_config() const {
  SyntheticConfig s = synthetic;
  s.window = window;
  s.open_hour = open_hour;
  s.close_hour = close_hour;
  return s;
}

std::vector<ModelSpec> RunConfig::daily_specs() const { return parse_models(daily_models, gbr, "models.daily"); }
std::vector<ModelSpec> RunConfig::hourly_specs() const { return parse_models(hourly_models, gbr, "models.hourly"); }

std::vector<PolicySpec> RunConfig::policy_specs() const {
  if (policies.empty()) throw ConfigError("config key 'policies.list': policy list is empty");
  std::vector<PolicySpec> out;
  for (const auto& p : policies) {
    try {
      out.push_back(parse_policy(p, bin.notification_threshold));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config key 'policies.list': ") + e.what());
    }
  }
  return out;
}

std::filesystem::path RunConfig::resolve(const std::filesystem::path& out_dir, const std::string& p) const {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : out_dir / path;
}

nlohmann::json RunConfig::echo() const {
  RunConfig copy = *this;
  json out = json::object();
  for (const auto& f : fields(copy)) {
    if (!f.echo) continue;
    const auto dot = f.key.find('.');
    out[f.key.substr(0, dot)][f.key.substr(dot + 1)] = f.get();
  }
  return out;
}

std::string RunConfig::hash() const {
  const auto text = echo().dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  auto f = fields(cfg);
  std::map<std::string, Field*> by_key;
  for (auto& x : f) by_key[x.key] = &x;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside a section");
    }
    for (const auto& [name, value] : entries) {
      const auto key = section + "." + name;
      const auto it = by_key.find(key);
      if (it == by_key.end()) throw ConfigError("config: unknown key '" + key + "'");
      it->second->set(value.data());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& cfg) {
  RunConfig copy = cfg;
  std::string section;
  for (const auto& f : fields(copy)) {
    const auto dot = f.key.find('.');
    const auto s = f.key.substr(0, dot);
    if (s != section) {
      out << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    out << f.key.substr(dot + 1) << " = " << f.text() << '\n';
  }
}

}  // namespace binwatch
