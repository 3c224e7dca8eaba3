#include "binwatch/model.hpp"

#include <cmath>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

namespace binwatch {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int parse_positive(std::string_view s, std::string_view what) {
  const auto v = csv::parse_int(s);
  if (!v || *v < 1) throw ConfigError(std::string(what) + ": expected a positive integer, got '" + std::string(s) + "'");
  return static_cast<int>(*v);
}

}  // namespace

ModelSpec parse_model_spec(std::string_view token, const GradientBoostingParams& gbr) {
  const auto colon = token.find(':');
  const auto name = token.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : token.substr(colon + 1);
  if (name == "naive" && arg.empty()) return spec::Naive{};
  if (name == "seasonal_naive") return spec::SeasonalNaive{arg.empty() ? kWeekPeriod : parse_positive(arg, "seasonal_naive")};
  if (name == "sma") return spec::SeasonalMovingAverage{arg.empty() ? 5 : parse_positive(arg, "sma")};
  if (name == "ols" && arg.empty()) return spec::LinearRegression{};
  if (name == "gbr" && arg.empty()) {
    gbr.validate();
    return spec::GradientBoosting{gbr};
  }
  throw ConfigError("unknown model '" + std::string(token) + "'");
}

std::string model_key(const ModelSpec& s) {
  return std::visit(overloaded{
                        [](const spec::Naive&) { return std::string("naive"); },
                        [](const spec::SeasonalNaive& m) { return "seasonal_naive_" + std::to_string(m.period); },
                        [](const spec::SeasonalMovingAverage& m) { return "sma_" + std::to_string(m.weeks); },
                        [](const spec::LinearRegression&) { return std::string("ols"); },
                        [](const spec::GradientBoosting&) { return std::string("gbr"); },
                    },
                    s);
}

std::string model_label(const ModelSpec& s) {
  return std::visit(
      overloaded{
          [](const spec::Naive&) { return std::string("Naive forecast"); },
          [](const spec::SeasonalNaive& m) { return "Seasonal naive forecast (m=" + std::to_string(m.period) + ")"; },
          [](const spec::SeasonalMovingAverage& m) {
            return "Seasonal moving average (x=" + std::to_string(m.weeks) + ")";
          },
          [](const spec::LinearRegression&) { return std::string("Multiple linear regression"); },
          [](const spec::GradientBoosting&) { return std::string("Gradient boosting regressor"); },
      },
      s);
}

bool needs_training(const ModelSpec& s) {
  return std::holds_alternative<spec::LinearRegression>(s) || std::holds_alternative<spec::GradientBoosting>(s);
}

void validate(const ModelSpec& s) {
  std::visit(overloaded{
                 [](const spec::Naive&) {},
                 [](const spec::SeasonalNaive& m) {
                   if (m.period < 1) throw ConfigError("seasonal naive: m must be >= 1");
                 },
                 [](const spec::SeasonalMovingAverage& m) {
                   if (m.weeks < 1) throw ConfigError("seasonal moving average: x must be >= 1");
                 },
                 [](const spec::LinearRegression&) {},
                 [](const spec::GradientBoosting& m) { m.params.validate(); },
             },
             s);
}

FeatureMatrix design_matrix(std::span<const FeatureRow> rows) {
  FeatureMatrix m(rows.size(), kNumPredictors);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto p = rows[r].predictors();
    for (std::size_t c = 0; c < kNumPredictors; ++c) m(r, c) = p[c];
  }
  return m;
}

std::vector<double> targets(std::span<const FeatureRow> rows) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(r.target);
  return y;
}

std::vector<std::string> predictor_names() { return {kPredictorNames.begin(), kPredictorNames.end()}; }

double FittedModel::predict_raw(const FeatureRow& row) const {
  return std::visit(
      overloaded{
          [&](const Baseline& b) {
            return std::visit(overloaded{
                                  [&](const spec::Naive&) { return naive_forecast(*b.history, row.date); },
                                  [&](const spec::SeasonalNaive& m) {
                                    return seasonal_naive_forecast(*b.history, row.date, m.period);
                                  },
                                  [&](const spec::SeasonalMovingAverage& m) {
                                    return seasonal_moving_average(*b.history, row.date, m.weeks);
                                  },
                                  [](const auto&) -> double { throw ConfigError("not a baseline"); },
                              },
                              b.spec);
          },
          [&](const LinearModel& m) {
            const auto p = row.predictors();
            return m.predict_raw(p);
          },
          [&](const GradientBoostingModel& m) {
            const auto p = row.predictors();
            return m.predict_raw(p);
          },
      },
      state_);
}

FittedModel fit_model(const ModelSpec& s, std::span<const FeatureRow> train,
                      std::shared_ptr<const DailySeries> history, Exec exec) {
  validate(s);
  if (std::holds_alternative<spec::LinearRegression>(s)) {
    return FittedModel(fit_ols(design_matrix(train), targets(train), predictor_names()));
  }
  if (const auto* g = std::get_if<spec::GradientBoosting>(&s)) {
    return FittedModel(fit_gbr(design_matrix(train), targets(train), g->params, exec));
  }
  if (!history) throw ConfigError("baseline model needs a daily history");
  return FittedModel(FittedModel::Baseline{s, std::move(history)});
}

double predict(const FittedModel& model, const FeatureRow& row) {
  const double y = model.predict_raw(row);
  if (!std::isfinite(y)) throw DataError("model produced a non-finite forecast for " + format_date(row.date));
  return y < 0.0 ? 0.0 : y;
}

nlohmann::json model_to_json(const FittedModel& model) {
  using nlohmann::json;
  return std::visit(overloaded{
                        [](const FittedModel::Baseline& b) {
                          return json{{"type", "baseline"}, {"model", model_key(b.spec)}};
                        },
                        [](const LinearModel& m) {
                          json j{{"type", "ols"}, {"intercept", m.intercept}};
                          j["names"] = m.names;
                          j["coefficients"] = m.coefficients;
                          j["dropped_constant"] = m.dropped_constant;
                          return j;
                        },
                        [](const GradientBoostingModel& m) {
                          json trees = json::array();
                          for (const auto& t : m.trees) {
                            json nodes = json::array();
                            for (const auto& n : t.nodes()) {
                              nodes.push_back({{"feature", n.feature},
                                               {"threshold", n.threshold},
                                               {"left", n.left},
                                               {"right", n.right},
                                               {"value", n.value},
                                               {"n_samples", n.n_samples}});
                            }
                            trees.push_back(std::move(nodes));
                          }
                          return json{{"type", "gbr"}, {"f0", m.f0}, {"shrinkage", m.shrinkage}, {"trees", trees}};
                        },
                    },
                    model.state());
}

FittedModel model_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "ols") {
    LinearModel m;
    m.intercept = j.at("intercept").get<double>();
    m.names = j.at("names").get<std::vector<std::string>>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.dropped_constant = j.at("dropped_constant").get<std::vector<std::size_t>>();
    return FittedModel(std::move(m));
  }
  if (type == "gbr") {
    GradientBoostingModel m;
    m.f0 = j.at("f0").get<double>();
    m.shrinkage = j.at("shrinkage").get<double>();
    for (const auto& t : j.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const auto& n : t) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.value = n.at("value").get<double>();
        node.n_samples = n.at("n_samples").get<std::size_t>();
        nodes.push_back(node);
      }
      m.trees.emplace_back(std::move(nodes));
    }
    return FittedModel(std::move(m));
  }
  throw DataError("model document: cannot load model of type '" + type + "'");
}

}  // namespace binwatch
