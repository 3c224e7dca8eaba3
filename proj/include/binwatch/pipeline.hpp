#pragma once

// Stage wiring shared by the CLI and the acceptance tests: in-memory runs plus
// file-backed stages that read and write the output directory.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "binwatch/config.hpp"
#include "binwatch/dataset.hpp"
#include "binwatch/evaluation.hpp"
#include "binwatch/simulator.hpp"
#include "binwatch/synthgen.hpp"

namespace binwatch {

namespace files {
inline constexpr const char* kCalibration = "calibration.json";
inline constexpr const char* kDataset = "dataset.csv";
inline constexpr const char* kEvalDaily = "eval_daily.csv";
inline constexpr const char* kEvalHourly = "eval_hourly.csv";
inline constexpr const char* kEvalJson = "eval.json";
inline constexpr const char* kDailyForecasts = "daily_forecasts.csv";
inline constexpr const char* kHourlyForecasts = "hourly_forecasts.csv";
inline constexpr const char* kProfile = "profile.csv";
inline constexpr const char* kSimulationCsv = "simulation.csv";
inline constexpr const char* kSimulationJson = "simulation.json";
inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportText = "report.txt";
}  // namespace files

struct InputData {
  std::vector<ReturnEvent> events;
  std::vector<WeatherRecord> weather;
  std::set<Date> holidays;
};

InputData to_input(SyntheticData data);

/// One named forecast per slot of `actual`.
struct HourlyForecasts {
  HourlySeries actual;
  std::vector<std::string> keys;
  std::vector<std::vector<double>> values;  // aligned with keys

  const std::vector<double>* find(const std::string& key) const;
};

struct EvalResult {
  HourlyAggregate hourly;
  DailySeries daily;
  Dataset dataset;
  FoldAssignment folds;
  std::vector<EvalReport> daily_reports;   // models.daily order
  std::vector<EvalReport> hourly_reports;  // models.hourly order
  std::vector<std::string> daily_keys;     // every model run through CV
  std::vector<std::vector<double>> daily_oof;
  HourlyForecasts hourly_forecasts;        // scored days only
  WeekdayHourProfile final_profile;
  SeriesStats daily_stats;
  SeriesStats hourly_stats;
  std::optional<std::vector<double>> daily_acf;
  std::optional<std::vector<double>> hourly_acf;
};

inline constexpr int kAcfMaxLag = 30;

EvalResult run_eval(const RunConfig& cfg, const InputData& in);

struct SimResult {
  std::vector<BinFullEvent> events;
  std::vector<PolicyResult> results;
};

SimResult run_simulate(const RunConfig& cfg, const HourlyForecasts& forecasts);

nlohmann::json provenance(const RunConfig& cfg);
nlohmann::json eval_json(const RunConfig& cfg, const EvalResult& r);
nlohmann::json simulation_json(const RunConfig& cfg, const SimResult& r);
/// Merges the stage documents. `calibration` may be null.
nlohmann::json report_json(const RunConfig& cfg, const nlohmann::json& eval, const nlohmann::json& simulation,
                           const nlohmann::json& calibration);
/// Problems found against the documented report layout; empty when valid.
std::vector<std::string> check_report_schema(const nlohmann::json& report);
void write_summary(std::ostream& out, const nlohmann::json& report);

void write_hourly_forecasts(std::ostream& out, const HourlyForecasts& f);
HourlyForecasts read_hourly_forecasts(std::istream& in, int open_hour, int hours_per_day);

// File-backed stages. Each returns normally on success.

/// Writes events, weather and holidays; returns whether calibration passed.
bool stage_generate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void stage_eval(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void stage_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void stage_report(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

InputData load_inputs(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace binwatch
