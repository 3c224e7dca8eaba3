#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "binwatch/matrix.hpp"

namespace binwatch {

/// Condition-number ceiling for the design matrix (intercept included).
inline constexpr double kOlsMaxCondition = 1e10;

struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coefficients;           // one per input column
  std::vector<std::string> names;             // column names
  std::vector<std::size_t> dropped_constant;  // zero-variance columns, coefficient fixed at 0

  double predict_raw(std::span<const double> x) const;
};

/// Ordinary least squares with intercept, solved by column-pivoted Householder
/// QR. Columns that are constant on the training rows are dropped (their
/// coefficient is 0; the intercept absorbs them). If the remaining design has
/// condition number above kOlsMaxCondition, throws FitError naming the
/// collinear columns.
LinearModel fit_ols(const FeatureMatrix& x, std::span<const double> targets,
                    std::vector<std::string> names = {});

}  // namespace binwatch
