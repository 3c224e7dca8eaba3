#include <algorithm>
#include <cmath>
#include <vector>

#include "binwatch/kernels.hpp"

namespace binwatch {

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r].at(c);
  return m;
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
  std::vector<double> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
  return out;
}

}  // namespace binwatch

namespace binwatch::kernels {

bool improves(double score, double incumbent) {
  if (!std::isfinite(incumbent)) return std::isfinite(score);
  return score > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

SplitCandidate best_split_for_feature(const FeatureMatrix& x, std::span<const double> targets,
                                      std::span<const std::size_t> idx, std::size_t feature,
                                      std::size_t min_samples_leaf) {
  SplitCandidate best;
  const std::size_t n = idx.size();
  if (n < 2 * min_samples_leaf || n < 2) return best;

  const auto col = x.column(feature);
  std::vector<std::size_t> order(idx.begin(), idx.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return col[a] < col[b] || (col[a] == col[b] && a < b);
  });

  double total = 0.0;
  for (auto i : order) total += targets[i];

  double left = 0.0;
  for (std::size_t p = 1; p < n; ++p) {
    left += targets[order[p - 1]];
    const double lo = col[order[p - 1]];
    const double hi = col[order[p]];
    if (p < min_samples_leaf || n - p < min_samples_leaf || !(lo < hi)) continue;
    const double right = total - left;
    const double score = left * left / static_cast<double>(p) +
                         right * right / static_cast<double>(n - p);
    if (improves(score, best.score)) {
      best.feature = static_cast<int>(feature);
      best.threshold = lo + (hi - lo) / 2.0;
      best.score = score;
    }
  }
  return best;
}

SplitCandidate best_split_serial(const FeatureMatrix& x, std::span<const double> targets,
                                 std::span<const std::size_t> idx, std::size_t min_samples_leaf) {
  SplitCandidate best;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    const auto c = best_split_for_feature(x, targets, idx, f, min_samples_leaf);
    if (c.valid() && improves(c.score, best.score)) best = c;
  }
  return best;
}

SplitCandidate best_split_omp(const FeatureMatrix& x, std::span<const double> targets,
                              std::span<const std::size_t> idx, std::size_t min_samples_leaf) {
  const auto nf = static_cast<long>(x.cols());
  std::vector<SplitCandidate> per_feature(x.cols());

#pragma omp parallel for schedule(static)
  for (long f = 0; f < nf; ++f) {
    per_feature[static_cast<std::size_t>(f)] =
        best_split_for_feature(x, targets, idx, static_cast<std::size_t>(f), min_samples_leaf);
  }

  SplitCandidate best;
  for (const auto& c : per_feature)
    if (c.valid() && improves(c.score, best.score)) best = c;
  return best;
}

}  // namespace binwatch::kernels
