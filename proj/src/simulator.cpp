#include "binwatch/simulator.hpp"

#include <ostream>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

namespace binwatch {

void BinConfig::validate() const {
  if (!(notification_threshold > 0.0)) throw ConfigError("bin: notification threshold must be > 0");
  if (!(notification_threshold < static_cast<double>(headroom_items))) {
    throw ConfigError("bin: notification threshold must be below the headroom (" + std::to_string(headroom_items) + ")");
  }
  if (headroom_items >= full_capacity_items) throw ConfigError("bin: headroom must be below full capacity");
}

PolicySpec parse_policy(std::string_view token, double default_threshold) {
  auto bad = [&] { return ConfigError("unknown policy '" + std::string(token) + "'"); };
  const auto c1 = token.find(':');
  if (c1 == std::string_view::npos) throw bad();
  const auto kind = token.substr(0, c1);
  const auto rest = token.substr(c1 + 1);
  if (kind == "hour") {
    const auto h = csv::parse_int(rest);
    if (!h || *h < 0) throw ConfigError("policy '" + std::string(token) + "': hours must be >= 0");
    return policy::HourOffset{static_cast<int>(*h)};
  }
  if (kind == "forecast") {
    const auto c2 = rest.find(':');
    policy::ForecastBased p{std::string(rest.substr(0, c2)), default_threshold};
    if (c2 != std::string_view::npos) {
      const auto t = csv::parse_double(rest.substr(c2 + 1));
      if (!t) throw ConfigError("policy '" + std::string(token) + "': bad threshold");
      p.threshold = *t;
    }
    if (p.source.empty()) throw bad();
    return p;
  }
  throw bad();
}

std::string policy_kind(const PolicySpec& p) {
  return std::holds_alternative<policy::HourOffset>(p) ? "hour_offset" : "forecast";
}

std::string policy_detail(const PolicySpec& p) {
  if (const auto* h = std::get_if<policy::HourOffset>(&p)) return std::to_string(h->hours);
  return std::get<policy::ForecastBased>(p).source;
}

void validate(const PolicySpec& p, const BinConfig& cfg) {
  if (const auto* h = std::get_if<policy::HourOffset>(&p)) {
    if (h->hours < 0) throw ConfigError("hour policy: offset must be >= 0");
    return;
  }
  const auto& f = std::get<policy::ForecastBased>(p);
  if (!(f.threshold > 0.0) || !(f.threshold < static_cast<double>(cfg.headroom_items))) {
    throw ConfigError("forecast policy '" + f.source + "': threshold must be in (0, headroom)");
  }
}

std::vector<BinFullEvent> derive_events(std::span<const std::int64_t> actual, const BinConfig& cfg) {
  cfg.validate();
  if (actual.empty()) throw DataError("simulation: empty hourly series");
  std::vector<BinFullEvent> events;
  const std::int64_t trigger_level = cfg.trigger_level();
  std::int64_t level = 0;
  std::int64_t since_trigger = 0;
  bool triggered = false;
  std::size_t trigger = 0;
  for (std::size_t s = 0; s < actual.size(); ++s) {
    if (!triggered) {
      level += actual[s];
      if (level >= trigger_level) {
        triggered = true;
        trigger = s;
        since_trigger = 0;
      }
      continue;
    }
    since_trigger += actual[s];
    if (since_trigger >= cfg.headroom_items) {
      events.push_back({trigger, s});
      triggered = false;
      level = 0;
    }
  }
  if (events.empty()) throw DataError("simulation: series too short to produce a bin-full event");
  return events;
}

std::size_t notify_time(const PolicySpec& p, const BinFullEvent& e, std::span<const double> forecast) {
  if (const auto* h = std::get_if<policy::HourOffset>(&p)) return e.trigger_slot + static_cast<std::size_t>(h->hours);
  const auto& f = std::get<policy::ForecastBased>(p);
  if (forecast.size() <= e.full_slot) throw DataError("simulation: forecast '" + f.source + "' misses slots");
  double acc = 0.0;
  for (std::size_t s = e.trigger_slot + 1; s < e.full_slot; ++s) {
    acc += forecast[s];
    if (acc >= f.threshold) return s;
  }
  return e.full_slot;
}

PolicyResult run_policy(const PolicySpec& p, std::span<const BinFullEvent> events, std::span<const double> forecast) {
  PolicyResult r;
  r.kind = policy_kind(p);
  r.detail = policy_detail(p);
  r.n_events = events.size();
  if (events.empty()) throw DataError("simulation: no bin-full events");
  std::size_t early_sum = 0;
  for (const auto& e : events) {
    const auto n = notify_time(p, e, forecast);
    if (n < e.full_slot) {
      ++r.n_avoided;
      early_sum += e.full_slot - n;
    }
  }
  r.pct_avoided = 100.0 * static_cast<double>(r.n_avoided) / static_cast<double>(r.n_events);
  if (r.n_avoided > 0) r.avg_hours_too_early = static_cast<double>(early_sum) / static_cast<double>(r.n_avoided);
  return r;
}

std::vector<PolicyResult> compare_policies(std::span<const PolicySpec> policies, std::span<const BinFullEvent> events,
                                           std::span<const ForecastSource> forecasts, std::size_t n_slots,
                                           Exec exec) {
  std::vector<std::span<const double>> sources(policies.size());
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const auto* f = std::get_if<policy::ForecastBased>(&policies[i]);
    if (f == nullptr) continue;
    bool found = false;
    for (const auto& src : forecasts) {
      if (src.key != f->source) continue;
      if (src.hourly.size() != n_slots) {
        throw DataError("simulation: forecast '" + src.key + "' has " + std::to_string(src.hourly.size()) +
                        " slots, trace has " + std::to_string(n_slots));
      }
      sources[i] = src.hourly;
      found = true;
      break;
    }
    if (!found) throw DataError("simulation: no hourly forecasts for method '" + f->source + "'");
  }

  std::vector<PolicyResult> out(policies.size());
  std::vector<std::string> errors(policies.size());
  const auto n = static_cast<long>(policies.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = run_policy(policies[k], events, sources[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  return out;
}

nlohmann::json to_json(const PolicyResult& r) {
  nlohmann::json j{{"policy", r.kind},
                   {"hours_offset_or_method", r.detail},
                   {"n_events", r.n_events},
                   {"n_avoided", r.n_avoided},
                   {"pct_avoided", r.pct_avoided}};
  j["avg_hours_too_early"] = r.avg_hours_too_early ? nlohmann::json(*r.avg_hours_too_early) : nlohmann::json(nullptr);
  return j;
}

void write_table(std::ostream& out, std::span<const PolicyResult> results) {
  out << "policy,hours_offset_or_method,pct_avoided,avg_hours_too_early,n_events\n";
  for (const auto& r : results) {
    out << r.kind << ',' << r.detail << ',' << csv::format_fixed(r.pct_avoided, 2) << ','
        << (r.avg_hours_too_early ? csv::format_fixed(*r.avg_hours_too_early, 2) : std::string("NA")) << ','
        << r.n_events << '\n';
  }
}

}  // namespace binwatch
