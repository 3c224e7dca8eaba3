#include "binwatch/gbr.hpp"

#include "binwatch/error.hpp"

namespace binwatch {

void GradientBoostingParams::validate() const {
  if (n_stages < 0) throw ConfigError("gbr: n_stages must be >= 0");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) throw ConfigError("gbr: shrinkage must be in (0, 1]");
  if (max_depth < 1) throw ConfigError("gbr: max_depth must be >= 1");
  if (min_samples_leaf < 1) throw ConfigError("gbr: min_samples_leaf must be >= 1");
}

double GradientBoostingModel::predict_raw(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return f0 + shrinkage * sum;
}

GradientBoostingModel fit_gbr(const FeatureMatrix& x, std::span<const double> targets,
                              const GradientBoostingParams& params, Exec exec) {
  params.validate();
  const std::size_t n = x.rows();
  if (n == 0) throw DataError("gbr: no training rows");
  if (targets.size() != n) throw DataError("gbr: target length mismatch");

  GradientBoostingModel model;
  model.shrinkage = params.shrinkage;
  double sum = 0.0;
  for (double y : targets) sum += y;
  model.f0 = sum / static_cast<double>(n);

  std::vector<double> fitted(n, model.f0);
  std::vector<double> residual(n);
  const TreeParams tp{params.max_depth, params.min_samples_leaf};
  std::vector<double> row(x.cols());
  model.trees.reserve(static_cast<std::size_t>(params.n_stages));
  for (int m = 0; m < params.n_stages; ++m) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = targets[i] - fitted[i];
    auto tree = fit_regression_tree(x, residual, tp, exec);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < x.cols(); ++c) row[c] = x(i, c);
      fitted[i] += params.shrinkage * tree.predict(row);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace binwatch
