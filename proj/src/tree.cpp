#include "binwatch/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "binwatch/error.hpp"
#include "binwatch/kernels.hpp"

namespace binwatch {

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes_.empty()) return 0.0;
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                         : n.right);
  }
  return nodes_[i].value;
}

int RegressionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const double> y, const TreeParams& p, Exec exec)
      : x_(x), y_(y), params_(p), exec_(exec) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(x_.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    grow(all, 0);
    return std::move(nodes_);
  }

 private:
  int grow(const std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double sum = 0.0;
    for (auto i : idx) sum += y_[i];
    const double n = static_cast<double>(idx.size());
    const double mean = sum / n;
    nodes_[static_cast<std::size_t>(id)].value = mean;
    nodes_[static_cast<std::size_t>(id)].n_samples = idx.size();

    if (depth >= params_.max_depth || is_pure(idx)) return id;

    const auto split = kernels::best_split(exec_, x_, y_, idx, params_.min_samples_leaf);
    if (!split.valid()) return id;
    double sse = 0.0;
    for (auto i : idx) sse += (y_[i] - mean) * (y_[i] - mean);
    const double gain = split.score - sum * sum / n;
    if (!(gain > 1e-10 * std::max(1.0, sse))) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto col = x_.column(static_cast<std::size_t>(split.feature));
    for (auto i : idx) (col[i] <= split.threshold ? left : right).push_back(i);

    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  bool is_pure(const std::vector<std::size_t>& idx) const {
    return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return y_[i] == y_[idx.front()]; });
  }

  const FeatureMatrix& x_;
  std::span<const double> y_;
  TreeParams params_;
  Exec exec_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree fit_regression_tree(const FeatureMatrix& x, std::span<const double> targets,
                                   const TreeParams& params, Exec exec) {
  if (x.rows() == 0) throw DataError("regression tree: no training rows");
  if (targets.size() != x.rows()) throw DataError("regression tree: target length mismatch");
  if (params.max_depth < 0) throw ConfigError("regression tree: max_depth must be >= 0");
  if (params.min_samples_leaf < 1) throw ConfigError("regression tree: min_samples_leaf must be >= 1");
  return RegressionTree(TreeBuilder(x, targets, params, exec).build());
}

}  // namespace binwatch
