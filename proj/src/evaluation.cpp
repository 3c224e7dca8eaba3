#include "binwatch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"
#include "binwatch/rng.hpp"

namespace binwatch {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void fill_scores(EvalReport& r, std::span<const double> actual, std::span<const double> forecast) {
  r.n = actual.size();
  r.mae = mae(actual, forecast);
  r.mean_actual = mean_of(actual);
  if (r.mean_actual != 0.0) r.mae_over_mean_pct = r.mae / r.mean_actual * 100.0;
}

}  // namespace

double mae(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size()) throw DataError("mae: length mismatch");
  if (actual.empty()) throw DataError("mae: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += std::abs(actual[i] - forecast[i]);
  return s / static_cast<double>(actual.size());
}

double mae_over_mean(std::span<const double> actual, std::span<const double> forecast) {
  const double e = mae(actual, forecast);
  const double m = mean_of(actual);
  if (m == 0.0) throw DataError("mae_over_mean: mean of actuals is zero");
  return e / m * 100.0;
}

FoldAssignment make_folds(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation: k must be >= 2");
  if (static_cast<std::size_t>(k) > n) {
    throw DataError("cross-validation: k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " rows");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Random rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);

  FoldAssignment f;
  f.k = k;
  f.fold_of.assign(n, 0);
  f.folds.resize(static_cast<std::size_t>(k));
  const auto kk = static_cast<std::size_t>(k);
  for (std::size_t fold = 0; fold < kk; ++fold) {
    const std::size_t begin = fold * n / kk;
    const std::size_t end = (fold + 1) * n / kk;
    for (std::size_t p = begin; p < end; ++p) {
      f.folds[fold].push_back(perm[p]);
      f.fold_of[perm[p]] = static_cast<int>(fold);
    }
    std::sort(f.folds[fold].begin(), f.folds[fold].end());
  }
  return f;
}

CvResult kfold_cv(std::span<const FeatureRow> rows, const ModelSpec& spec, const FoldAssignment& folds,
                  std::shared_ptr<const DailySeries> history, Exec exec) {
  validate(spec);
  if (folds.fold_of.size() != rows.size()) throw ConfigError("cross-validation: fold assignment size mismatch");
  CvResult out;
  out.report.method = model_key(spec);
  out.report.label = model_label(spec);
  out.oof_forecasts.assign(rows.size(), 0.0);
  out.report.fold_mae.assign(folds.folds.size(), 0.0);

  const auto nfolds = static_cast<long>(folds.folds.size());
  // Folds run in parallel with serial kernels inside; each fold writes only
  // its own rows, so the result does not depend on scheduling.
  const Exec inner = exec == Exec::Parallel ? Exec::Serial : exec;
  std::vector<std::string> errors(folds.folds.size());

#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long fi = 0; fi < nfolds; ++fi) {
    const auto f = static_cast<std::size_t>(fi);
    try {
      std::vector<FeatureRow> train;
      if (needs_training(spec)) {
        train.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (folds.fold_of[i] != static_cast<int>(f)) train.push_back(rows[i]);
      }
      const auto model = fit_model(spec, train, history, inner);
      std::vector<double> a;
      std::vector<double> p;
      for (auto i : folds.folds[f]) {
        out.oof_forecasts[i] = predict(model, rows[i]);
        a.push_back(rows[i].target);
        p.push_back(out.oof_forecasts[i]);
      }
      out.report.fold_mae[f] = mae(a, p);
    } catch (const std::exception& e) {
      errors[f] = e.what();
    }
  }
  for (std::size_t f = 0; f < errors.size(); ++f) {
    if (!errors[f].empty()) throw FitError(out.report.method + " fold " + std::to_string(f) + ": " + errors[f]);
  }

  const auto actual = targets(rows);
  fill_scores(out.report, actual, out.oof_forecasts);
  return out;
}

CvResult kfold_cv(std::span<const FeatureRow> rows, const ModelSpec& spec, int k, std::uint64_t seed,
                  std::shared_ptr<const DailySeries> history, Exec exec) {
  return kfold_cv(rows, spec, make_folds(rows.size(), k, seed), std::move(history), exec);
}

HourlyEvalResult hourly_eval(std::string method, std::string label, std::span<const Date> dates,
                             std::span<const double> daily_forecasts, const HourlySeries& actual,
                             ProfileOptions options, const FoldAssignment* folds) {
  if (dates.size() != daily_forecasts.size()) throw DataError("hourly_eval: one forecast per scored day required");
  if (dates.empty()) throw DataError("hourly_eval: no scored days");
  if (folds != nullptr && folds->fold_of.size() != dates.size()) {
    throw ConfigError("hourly_eval: fold assignment size mismatch");
  }

  HourlyEvalResult out;
  out.report.method = std::move(method);
  out.report.label = std::move(label);
  const auto hpd = static_cast<std::size_t>(actual.hours_per_day);

  ProfileAccumulator acc(actual.open_hour, actual.hours_per_day, options);
  std::vector<double> act;
  act.reserve(dates.size() * hpd);
  out.forecasts.reserve(dates.size() * hpd);
  std::size_t day = 0;
  for (std::size_t s = 0; s < dates.size(); ++s) {
    const auto target = std::chrono::sys_days{dates[s]};
    while (day < actual.days.size() && std::chrono::sys_days{actual.days[day]} < target) {
      acc.add_day(actual.days[day], actual.day(day));
      ++day;
    }
    if (day >= actual.days.size() || actual.days[day] != dates[s]) {
      throw DataError("hourly_eval: scored day " + format_date(dates[s]) + " missing or out of order");
    }
    const auto profile = acc.snapshot();
    const auto hourly = disaggregate(daily_forecasts[s], iso_weekday(dates[s]), profile);
    out.day_index.push_back(day);
    for (std::size_t h = 0; h < hpd; ++h) {
      out.forecasts.push_back(hourly[h]);
      act.push_back(static_cast<double>(actual.day(day)[h]));
    }
  }

  fill_scores(out.report, act, out.forecasts);
  if (folds != nullptr) {
    out.report.fold_mae.assign(folds->folds.size(), 0.0);
    for (std::size_t f = 0; f < folds->folds.size(); ++f) {
      std::vector<double> a;
      std::vector<double> p;
      for (auto s : folds->folds[f]) {
        for (std::size_t h = 0; h < hpd; ++h) {
          a.push_back(act[s * hpd + h]);
          p.push_back(out.forecasts[s * hpd + h]);
        }
      }
      out.report.fold_mae[f] = mae(a, p);
    }
  }
  return out;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j{{"method", r.method},
                   {"label", r.label},
                   {"mae", r.mae},
                   {"mean_actual", r.mean_actual},
                   {"n", r.n},
                   {"fold_mae", r.fold_mae}};
  j["mae_over_mean_pct"] = r.mae_over_mean_pct ? nlohmann::json(*r.mae_over_mean_pct) : nlohmann::json(nullptr);
  return j;
}

void write_table(std::ostream& out, std::span<const EvalReport> reports) {
  out << "method,mae,mae_over_mean_pct\n";
  for (const auto& r : reports) {
    out << r.method << ',' << csv::format_fixed(r.mae, 4) << ','
        << (r.mae_over_mean_pct ? csv::format_fixed(*r.mae_over_mean_pct, 4) : std::string("NA")) << '\n';
  }
}

}  // namespace binwatch
