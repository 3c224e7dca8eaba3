#include "binwatch/ols.hpp"

#include <Eigen/Dense>

#include "binwatch/error.hpp"

namespace binwatch {

double LinearModel::predict_raw(std::span<const double> x) const {
  double y = intercept;
  for (std::size_t c = 0; c < coefficients.size(); ++c) y += coefficients[c] * x[c];
  return y;
}

LinearModel fit_ols(const FeatureMatrix& x, std::span<const double> targets, std::vector<std::string> names) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (targets.size() != n) throw DataError("ols: target length mismatch");
  if (n < p + 1) {
    throw FitError("ols: need at least " + std::to_string(p + 1) + " rows for " + std::to_string(p) +
                   " predictors, got " + std::to_string(n));
  }
  if (names.empty()) {
    for (std::size_t c = 0; c < p; ++c) names.push_back("x" + std::to_string(c));
  }
  if (names.size() != p) throw ConfigError("ols: one name per column required");

  LinearModel model;
  model.coefficients.assign(p, 0.0);
  model.names = names;

  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < p; ++c) {
    const auto col = x.column(c);
    bool constant = true;
    for (double v : col) constant = constant && v == col[0];
    (constant ? model.dropped_constant : kept).push_back(c);
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kept.size() + 1));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    design(ri, 0) = 1.0;
    for (std::size_t k = 0; k < kept.size(); ++k) design(ri, static_cast<Eigen::Index>(k + 1)) = x(r, kept[k]);
    y(ri) = targets[r];
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (!(smin > 0.0) || smax / smin > kOlsMaxCondition) {
    // Rank from the singular values; the columns the pivoting pushes past
    // that rank are the ones expressible by the others.
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) * kOlsMaxCondition > smax) ++rank;
    std::string cols;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = rank; i < perm.size(); ++i) {
      const auto j = static_cast<std::size_t>(perm(i));
      if (!cols.empty()) cols += ", ";
      cols += j == 0 ? std::string("intercept") : names[kept[j - 1]];
    }
    throw FitError("ols: rank-deficient design (condition > 1e10); collinear columns: " + cols);
  }

  const Eigen::VectorXd beta = qr.solve(y);
  model.intercept = beta(0);
  for (std::size_t k = 0; k < kept.size(); ++k) model.coefficients[kept[k]] = beta(static_cast<Eigen::Index>(k + 1));
  return model;
}

}  // namespace binwatch
