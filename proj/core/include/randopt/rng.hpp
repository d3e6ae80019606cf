#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "randopt/types.hpp"

namespace randopt {

/// Counter-based random stream.
///
/// Output n of a stream with key K is splitmix64's finalizer applied to
/// K + n * golden_gamma, so the stream is a pure function of (key, counter).
/// split(i) derives an independent child key from (key, i) without touching
/// the parent's counter, which makes replication r of cell c reproducible
/// regardless of evaluation order or threading.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0) : key_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Child stream keyed by (this key, index).
  RngStream split(std::uint64_t index) const;

  /// Uniform on [0, 1) with 53 bits.
  double uniform();
  /// Standard normal via Box-Muller (no cached second variate).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniformly distributed point on the unit sphere in R^n.
  Vector unit_vector(Eigen::Index n);
  /// Vector of i.i.d. standard normals.
  Vector normal_vector(Eigen::Index n);

  /// k distinct indices drawn uniformly without replacement from [0, n),
  /// in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// splitmix64 output function.
std::uint64_t mix64(std::uint64_t z);

}  // namespace randopt
