#pragma once

// Forecast scoring: MAE, MAE/Mean, shuffled k-fold cross-validation and the
// hourly evaluation of disaggregated daily forecasts.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "binwatch/disaggregate.hpp"
#include "binwatch/model.hpp"

namespace binwatch {

inline constexpr std::string_view kFoldShuffleAlgorithm = "mt19937_64 fisher-yates (rejection-sampled index)";

/// sum |y_i - yhat_i| / n.
double mae(std::span<const double> actual, std::span<const double> forecast);
/// mae / mean(actual) * 100. Throws DataError when mean(actual) == 0.
double mae_over_mean(std::span<const double> actual, std::span<const double> forecast);

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;                     // per row
  std::vector<std::vector<std::size_t>> folds;  // row indices, ascending
};

/// Rows shuffled by `seed`, then cut into k contiguous chunks whose sizes
/// differ by at most one.
FoldAssignment make_folds(std::size_t n, int k, std::uint64_t seed);

struct EvalReport {
  std::string method;  // model key
  std::string label;
  double mae = 0.0;
  std::optional<double> mae_over_mean_pct;
  std::vector<double> fold_mae;
  double mean_actual = 0.0;
  std::size_t n = 0;
};

struct CvResult {
  EvalReport report;
  std::vector<double> oof_forecasts;  // aligned with the input rows
};

/// Each fold is scored by a model fitted on the other k-1 folds. Baselines
/// need no fit and are scored on the same points from true history.
CvResult kfold_cv(std::span<const FeatureRow> rows, const ModelSpec& spec, const FoldAssignment& folds,
                  std::shared_ptr<const DailySeries> history, Exec exec = Exec::Serial);

CvResult kfold_cv(std::span<const FeatureRow> rows, const ModelSpec& spec, int k, std::uint64_t seed,
                  std::shared_ptr<const DailySeries> history, Exec exec = Exec::Serial);

struct HourlyEvalResult {
  EvalReport report;
  std::vector<std::size_t> day_index;  // into actual.days, one per scored day
  std::vector<double> forecasts;       // scored days x hours_per_day
};

/// Disaggregates each scored day's forecast with the profile built from the
/// days strictly before it, then scores every business hour of the scored
/// days. `dates` must be ascending and present in `actual`.
HourlyEvalResult hourly_eval(std::string method, std::string label, std::span<const Date> dates,
                             std::span<const double> daily_forecasts, const HourlySeries& actual,
                             ProfileOptions options = {}, const FoldAssignment* folds = nullptr);

nlohmann::json to_json(const EvalReport& r);
/// `method,mae,mae_over_mean_pct`
void write_table(std::ostream& out, std::span<const EvalReport> reports);

}  // namespace binwatch
