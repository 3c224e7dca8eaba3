#pragma once

// Trace-driven bin-full simulation comparing hour-based and forecast-based
// notification policies. All slots are business-hour indices.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "binwatch/matrix.hpp"

namespace binwatch {

struct BinConfig {
  std::int64_t headroom_items = 131;
  double notification_threshold = 100.0;
  std::int64_t full_capacity_items = 200;

  /// 0 < threshold < headroom < capacity, else ConfigError.
  void validate() const;
  std::int64_t trigger_level() const noexcept { return full_capacity_items - headroom_items; }
};

namespace policy {
struct HourOffset {
  int hours = 0;
};
struct ForecastBased {
  std::string source;  // model key of the hourly forecast
  double threshold = 100.0;
};
}  // namespace policy

using PolicySpec = std::variant<policy::HourOffset, policy::ForecastBased>;

/// "hour:2", "forecast:sma_5" or "forecast:gbr:100".
PolicySpec parse_policy(std::string_view token, double default_threshold);
std::string policy_kind(const PolicySpec& p);    // "hour_offset" | "forecast"
std::string policy_detail(const PolicySpec& p);  // hours or method key
void validate(const PolicySpec& p, const BinConfig& cfg);

struct BinFullEvent {
  std::size_t trigger_slot = 0;
  std::size_t full_slot = 0;

  friend bool operator==(const BinFullEvent&, const BinFullEvent&) = default;
};

/// Walks the trace from an empty bin. The trigger is the first slot where the
/// cycle's cumulative arrivals reach capacity - headroom; the full slot is the
/// first later slot where arrivals after the trigger reach the headroom. The
/// bin is empty again from the slot after the full slot.
std::vector<BinFullEvent> derive_events(std::span<const std::int64_t> actual, const BinConfig& cfg);

/// Notification slot. A forecast policy that never reaches its threshold
/// before the full slot notifies at the full slot (late).
std::size_t notify_time(const PolicySpec& p, const BinFullEvent& e, std::span<const double> forecast);

struct PolicyResult {
  std::string kind;
  std::string detail;
  std::size_t n_events = 0;
  std::size_t n_avoided = 0;
  double pct_avoided = 0.0;
  std::optional<double> avg_hours_too_early;  // over avoided events
};

PolicyResult run_policy(const PolicySpec& p, std::span<const BinFullEvent> events,
                        std::span<const double> forecast);

/// Forecast sources are looked up by ForecastBased::source; HourOffset
/// policies ignore them.
struct ForecastSource {
  std::string key;
  std::span<const double> hourly;
};

std::vector<PolicyResult> compare_policies(std::span<const PolicySpec> policies, std::span<const BinFullEvent> events,
                                           std::span<const ForecastSource> forecasts, std::size_t n_slots,
                                           Exec exec = Exec::Serial);

nlohmann::json to_json(const PolicyResult& r);
/// `policy,hours_offset_or_method,pct_avoided,avg_hours_too_early,n_events`
void write_table(std::ostream& out, std::span<const PolicyResult> results);

}  // namespace binwatch
