#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "binwatch/matrix.hpp"

namespace binwatch {

struct TreeParams {
  int max_depth = 3;                 // 0 gives a single leaf
  std::size_t min_samples_leaf = 1;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean training target of the node
  std::size_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Binary regression tree stored in pre-order (node, left subtree, right subtree).
class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  double predict(std::span<const double> x) const;
  int depth() const;
  std::size_t leaf_count() const;

 private:
  std::vector<TreeNode> nodes_;
};

/// Greedy top-down CART fit under squared error. A node becomes a leaf when
/// it reaches max_depth, is pure, cannot be split with min_samples_leaf on
/// both sides, or no split reduces its squared error.
RegressionTree fit_regression_tree(const FeatureMatrix& x, std::span<const double> targets,
                                   const TreeParams& params, Exec exec = Exec::Serial);

}  // namespace binwatch
