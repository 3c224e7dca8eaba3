#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace binwatch {

/// Execution policy for the data-parallel kernels. Both paths produce
/// bit-identical results; Serial is the reference.
enum class Exec { Serial, Parallel };

/// Dense column-major feature matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }

  std::span<const double> column(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
  std::vector<double> row(std::size_t r) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace binwatch
