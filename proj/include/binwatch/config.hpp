#pragma once

// Run configuration read from an INI file. Relative data paths resolve
// against the output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "binwatch/calendar.hpp"
#include "binwatch/disaggregate.hpp"
#include "binwatch/gbr.hpp"
#include "binwatch/model.hpp"
#include "binwatch/simulator.hpp"
#include "binwatch/synthgen.hpp"

namespace binwatch {

std::string_view version();

struct RunConfig {
  struct Paths {
    std::string events = "events.csv";
    std::string weather = "weather.csv";
    std::string holidays = "holidays.csv";
    std::string output = "out";
  } paths;

  int open_hour = 8;
  int close_hour = 21;
  std::set<int> closed_weekdays{7};
  Window window = SyntheticConfig{}.window;

  std::vector<std::string> daily_models{"naive", "seasonal_naive", "sma:5", "ols", "gbr"};
  std::vector<std::string> hourly_models{"naive", "sma:5", "gbr"};
  GradientBoostingParams gbr;

  int cv_k = 10;
  std::uint64_t cv_seed = 42;
  bool parallel = true;  // execution only; never changes results

  ProfileOptions profile;
  BinConfig bin;
  std::vector<std::string> policies{"hour:0", "hour:2", "forecast:naive", "forecast:sma_5", "forecast:gbr"};

  SyntheticConfig synthetic;  // window and opening hours come from the calendar settings
  CalibrationTargets calibration;
  bool enforce_calibration = true;

  /// ConfigError naming the offending key.
  void validate() const;
  /// Policy checks against the bin and the hourly model list.
  void validate_policy_against(const PolicySpec& p) const;
  /// Sets both the cross-validation and the generator seed.
  void apply_seed(std::uint64_t seed);

  Exec exec() const noexcept { return parallel ? Exec::Parallel : Exec::Serial; }
  BusinessCalendar calendar(std::set<Date> holidays) const;
  SyntheticConfig synthetic_config() const;
  std::vector<ModelSpec> daily_specs() const;
  std::vector<ModelSpec> hourly_specs() const;
  std::vector<PolicySpec> policy_specs() const;

  std::filesystem::path resolve(const std::filesystem::path& out_dir, const std::string& p) const;

  /// Every parameter that can change a result, grouped by section.
  nlohmann::json echo() const;
  /// FNV-1a 64 of echo().dump(), as 16 hex digits.
  std::string hash() const;
};

/// Throws ConfigError on unknown sections or keys and on malformed values.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// INI text reproducing `cfg`.
void write_config(std::ostream& out, const RunConfig& cfg);

}  // namespace binwatch
