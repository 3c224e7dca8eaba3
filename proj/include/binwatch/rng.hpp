#pragma once

// Portable random stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; every transform below is implemented here rather
// than with <random> distributions, whose algorithms vary between libraries.

#include <cstdint>
#include <random>
#include <string_view>

namespace binwatch {

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64; uniform=53-bit; index=rejection; normal=marsaglia-polar; "
    "gamma=marsaglia-tsang; poisson=inversion(<30)/ptrs";

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Gamma(shape, scale), shape > 0.
  double gamma(double shape, double scale);
  std::int64_t poisson(double lambda);
  /// Gamma-Poisson mixture with mean `mean` and variance mean + mean^2 / dispersion.
  std::int64_t negative_binomial(double mean, double dispersion);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::int64_t poisson_ptrs(double lambda);

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace binwatch
