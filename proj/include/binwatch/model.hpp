#pragma once

// Uniform contract over the daily forecasters.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "binwatch/baselines.hpp"
#include "binwatch/dataset.hpp"
#include "binwatch/gbr.hpp"
#include "binwatch/ols.hpp"

namespace binwatch {

namespace spec {
struct Naive {};
struct SeasonalNaive {
  int period = kWeekPeriod;
};
struct SeasonalMovingAverage {
  int weeks = 5;
};
struct LinearRegression {};
struct GradientBoosting {
  GradientBoostingParams params;
};
}  // namespace spec

using ModelSpec = std::variant<spec::Naive, spec::SeasonalNaive, spec::SeasonalMovingAverage,
                               spec::LinearRegression, spec::GradientBoosting>;

/// Parses "naive", "seasonal_naive[:m]", "sma[:x]", "ols", "gbr".
ModelSpec parse_model_spec(std::string_view token, const GradientBoostingParams& gbr = {});
/// Stable identifier used as CSV column / JSON key, e.g. "sma_5".
std::string model_key(const ModelSpec& s);
/// Human-readable table label.
std::string model_label(const ModelSpec& s);
bool needs_training(const ModelSpec& s);
void validate(const ModelSpec& s);

FeatureMatrix design_matrix(std::span<const FeatureRow> rows);
std::vector<double> targets(std::span<const FeatureRow> rows);
std::vector<std::string> predictor_names();

class FittedModel {
 public:
  struct Baseline {
    ModelSpec spec;
    std::shared_ptr<const DailySeries> history;
  };
  using State = std::variant<Baseline, LinearModel, GradientBoostingModel>;

  explicit FittedModel(State s) : state_(std::move(s)) {}
  const State& state() const noexcept { return state_; }

  /// Raw model output before clamping.
  double predict_raw(const FeatureRow& row) const;

 private:
  State state_;
};

/// Baselines ignore `train` and read `history`; trained models ignore `history`.
FittedModel fit_model(const ModelSpec& s, std::span<const FeatureRow> train,
                      std::shared_ptr<const DailySeries> history, Exec exec = Exec::Serial);

/// Finite forecast clamped at 0 (item counts cannot be negative).
double predict(const FittedModel& model, const FeatureRow& row);

/// JSON dump of trained models (OLS coefficients or GBR trees).
nlohmann::json model_to_json(const FittedModel& model);
/// Inverse of model_to_json for trained models.
FittedModel model_from_json(const nlohmann::json& j);

}  // namespace binwatch
