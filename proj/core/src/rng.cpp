#include "randopt/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace randopt {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSplitSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(mix64(key_ ^ mix64(index * kSplitSalt + kGolden)));
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_index: n must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - (max() % n);
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % n;
}

Vector RngStream::normal_vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vector RngStream::unit_vector(Eigen::Index n) {
  for (;;) {
    Vector v = normal_vector(n);
    const double norm = v.norm();
    if (norm > 1e-300) return v / norm;
  }
}

std::vector<std::size_t> RngStream::sample_without_replacement(std::size_t n, std::size_t k) {
  if (k > n) throw InvalidArgument("sample_without_replacement: k > n");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace randopt
