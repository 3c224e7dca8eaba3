#pragma once

#include <span>
#include <vector>

#include "binwatch/matrix.hpp"
#include "binwatch/tree.hpp"

namespace binwatch {

struct GradientBoostingParams {
  int n_stages = 100;
  double shrinkage = 0.1;
  int max_depth = 3;
  std::size_t min_samples_leaf = 1;

  void validate() const;
};

/// Least-squares gradient boosting: prediction = f0 + shrinkage * sum of trees.
struct GradientBoostingModel {
  double f0 = 0.0;
  double shrinkage = 0.1;
  std::vector<RegressionTree> trees;

  double predict_raw(std::span<const double> x) const;
};

/// Deterministic (no subsampling). Stage m fits a tree to the residuals
/// y - F_{m-1}(x) and sets F_m = F_{m-1} + shrinkage * tree.
GradientBoostingModel fit_gbr(const FeatureMatrix& x, std::span<const double> targets,
                              const GradientBoostingParams& params, Exec exec = Exec::Serial);

}  // namespace binwatch
