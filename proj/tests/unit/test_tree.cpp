#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>

#include "binwatch/kernels.hpp"
#include "binwatch/tree.hpp"
#include "oracles.hpp"
#include "sweep.hpp"

using namespace binwatch;

TEST(Tree, PureTargetsGiveSingleLeaf) {
  const auto x = FeatureMatrix::from_rows({{1}, {2}, {3}});
  const std::vector<double> y{4, 4, 4};
  const auto t = fit_regression_tree(x, y, {});
  ASSERT_EQ(t.nodes().size(), 1u);
  EXPECT_EQ(t.nodes()[0].value, 4.0);
}

TEST(Tree, StepFunctionSplitsAtMidpoint) {
  const auto x = FeatureMatrix::from_rows({{1}, {2}, {3}, {4}});
  const std::vector<double> y{0, 0, 10, 10};
  const auto t = fit_regression_tree(x, y, {1, 1});
  ASSERT_EQ(t.nodes().size(), 3u);
  EXPECT_EQ(t.nodes()[0].feature, 0);
  EXPECT_EQ(t.nodes()[0].threshold, 2.5);
  EXPECT_EQ(t.predict(std::vector<double>{1.0}), 0.0);
  EXPECT_EQ(t.predict(std::vector<double>{4.0}), 10.0);
}

TEST(Tree, DepthZeroIsTheMean) {
  const auto x = FeatureMatrix::from_rows({{1}, {2}, {3}, {4}});
  const std::vector<double> y{0, 0, 10, 14};
  const auto t = fit_regression_tree(x, y, {0, 1});
  ASSERT_EQ(t.nodes().size(), 1u);
  EXPECT_EQ(t.nodes()[0].value, 6.0);
}

TEST(Tree, TiesGoToLowestFeatureThenThreshold) {
  // Both features separate the targets equally well.
  const auto x = FeatureMatrix::from_rows({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  const std::vector<double> y{0, 0, 5, 5};
  const auto t = fit_regression_tree(x, y, {1, 1});
  EXPECT_EQ(t.nodes()[0].feature, 0);
  // Symmetric targets: thresholds 0.5 and 2.5 score the same.
  const auto x2 = FeatureMatrix::from_rows({{0}, {1}, {2}, {3}});
  const std::vector<double> y2{0, 3, 3, 0};
  const auto t2 = fit_regression_tree(x2, y2, {1, 1});
  EXPECT_EQ(t2.nodes()[0].threshold, 0.5);
}

TEST(Tree, MinSamplesLeafIsHonoured) {
  std::mt19937_64 gen(9);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 200; ++i) {
    rows.push_back({static_cast<double>(gen() % 50), static_cast<double>(gen() % 7)});
    y.push_back(static_cast<double>(gen() % 100));
  }
  const auto t = fit_regression_tree(FeatureMatrix::from_rows(rows), y, {6, 9});
  for (const auto& n : t.nodes()) {
    EXPECT_GE(n.n_samples, 9u);
    if (!n.is_leaf()) {
      EXPECT_EQ(t.nodes()[static_cast<std::size_t>(n.left)].n_samples +
                    t.nodes()[static_cast<std::size_t>(n.right)].n_samples,
                n.n_samples);
    }
  }
  EXPECT_LE(t.depth(), 6);
}

TEST(Tree, LeafValueIsMeanOfRoutedTargets) {
  std::mt19937_64 gen(10);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 120; ++i) {
    rows.push_back({static_cast<double>(gen() % 30), static_cast<double>(gen() % 30)});
    y.push_back(static_cast<double>(gen() % 100));
  }
  const auto t = fit_regression_tree(FeatureMatrix::from_rows(rows), y, {3, 1});
  std::map<const void*, std::pair<double, int>> acc;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t k = 0;
    const auto& n = t.nodes();
    while (!n[k].is_leaf())
      k = static_cast<std::size_t>(rows[i][static_cast<std::size_t>(n[k].feature)] <= n[k].threshold ? n[k].left
                                                                                                    : n[k].right);
    auto& a = acc[&n[k]];
    a.first += y[i];
    a.second += 1;
  }
  for (const auto& [ptr, a] : acc) {
    const auto* leaf = static_cast<const TreeNode*>(ptr);
    EXPECT_NEAR(leaf->value, a.first / a.second, 1e-9);
  }
}

TEST(TreeOracle, ExhaustiveOneFeature) {
  const auto c = oracle::tree_sweep(6, {{0, 1, 2}}, {0, 1, 3}, 3, 1);
  EXPECT_EQ(c.mismatches, 0u) << "of " << c.datasets;
  EXPECT_GT(c.datasets, 500000u);
}

TEST(TreeOracle, ExhaustiveTwoFeatures) {
  auto c = oracle::tree_sweep(4, {{0, 1, 2}, {0, 1, 2}}, {0, 1, 3}, 3, 1);
  c += oracle::tree_sweep(6, {{0, 1}, {0, 1}}, {0, 2}, 3, 1, 5);
  EXPECT_EQ(c.mismatches, 0u) << "of " << c.datasets;
}

TEST(TreeOracle, ExhaustiveShallowAndMinLeaf) {
  auto c = oracle::tree_sweep(6, {{0, 1, 2}}, {0, 1, 3}, 1, 1);
  c += oracle::tree_sweep(6, {{0, 1, 2}}, {0, 1, 3}, 3, 2);
  c += oracle::tree_sweep(4, {{0, 1, 2}, {0, 1, 2}}, {0, 1, 3}, 2, 2);
  EXPECT_EQ(c.mismatches, 0u) << "of " << c.datasets;
}

TEST(TreeOracle, DetectsAWrongTree) {
  // The sweep must be able to fail: compare against a deliberately shallower oracle.
  const auto c = oracle::tree_sweep(4, {{0, 1, 2}}, {0, 1, 3}, 2, 1, 1, 1);
  EXPECT_GT(c.mismatches, 0u);
}

TEST(SplitKernel, SerialAndParallelAgree) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 300; ++i) {
      std::vector<double> r;
      for (int f = 0; f < 13; ++f) r.push_back(static_cast<double>(gen() % 40));
      rows.push_back(r);
      y.push_back(static_cast<double>(gen() % 1000) / 7.0);
    }
    const auto x = FeatureMatrix::from_rows(rows);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.size(); i += 1 + gen() % 2) idx.push_back(i);
    const auto a = kernels::best_split_serial(x, y, idx, 1 + trial % 4);
    const auto b = kernels::best_split_omp(x, y, idx, 1 + trial % 4);
    EXPECT_EQ(a.feature, b.feature);
    EXPECT_EQ(a.threshold, b.threshold);
    EXPECT_EQ(a.score, b.score);

    const auto ts = fit_regression_tree(x, y, {4, 2}, Exec::Serial);
    const auto tp = fit_regression_tree(x, y, {4, 2}, Exec::Parallel);
    ASSERT_EQ(ts.nodes().size(), tp.nodes().size());
    for (std::size_t i = 0; i < ts.nodes().size(); ++i) {
      EXPECT_EQ(ts.nodes()[i].feature, tp.nodes()[i].feature);
      EXPECT_EQ(ts.nodes()[i].threshold, tp.nodes()[i].threshold);
      EXPECT_EQ(ts.nodes()[i].value, tp.nodes()[i].value);
    }
  }
}
