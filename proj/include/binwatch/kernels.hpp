#pragma once

// Best-split search for squared-error regression trees.
//
// A candidate split of a node's samples on feature f at threshold t sends
// x[f] <= t left. Candidates are the midpoints between consecutive distinct
// sorted values that leave at least `min_samples_leaf` samples on each side.
// The score S_L^2/n_L + S_R^2/n_R is maximised, which is the same as
// minimising the children's summed squared error. Ties go to the lowest
// feature index, then the lowest threshold.

#include <cstddef>
#include <limits>
#include <span>

#include "binwatch/matrix.hpp"

namespace binwatch::kernels {

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double score = -std::numeric_limits<double>::infinity();

  bool valid() const noexcept { return feature >= 0; }
};

/// True when `score` beats `incumbent` by more than floating-point noise.
bool improves(double score, double incumbent);

/// Best split on one feature. `idx` lists the node's sample rows.
SplitCandidate best_split_for_feature(const FeatureMatrix& x, std::span<const double> targets,
                                      std::span<const std::size_t> idx, std::size_t feature,
                                      std::size_t min_samples_leaf);

/// Reference implementation: features scanned in order.
SplitCandidate best_split_serial(const FeatureMatrix& x, std::span<const double> targets,
                                 std::span<const std::size_t> idx, std::size_t min_samples_leaf);

/// Features scanned in parallel, reduced in feature order.
SplitCandidate best_split_omp(const FeatureMatrix& x, std::span<const double> targets,
                              std::span<const std::size_t> idx, std::size_t min_samples_leaf);

inline SplitCandidate best_split(Exec exec, const FeatureMatrix& x, std::span<const double> targets,
                                 std::span<const std::size_t> idx, std::size_t min_samples_leaf) {
  return exec == Exec::Parallel ? best_split_omp(x, targets, idx, min_samples_leaf)
                                : best_split_serial(x, targets, idx, min_samples_leaf);
}

}  // namespace binwatch::kernels
