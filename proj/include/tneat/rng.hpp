#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace tneat {

/// Stage tags used as the second path element of per-generation streams.
enum class Stage : std::uint64_t {
  init = 1,
  evaluate = 2,
  reproduce = 3,
  speciate = 4,
};

/*!
 * Deterministic, splittable random stream.
 *
 * A stream is identified by a master seed and a path of integers, e.g.
 * (generation, stage, genome index). The generator state is derived by hashing
 * the path, so a child stream depends only on its path and never on how many
 * values the parent has drawn. That makes per-genome randomness independent of
 * evaluation order and thread scheduling.
 *
 * Satisfies UniformRandomBitGenerator, so standard distributions can be used
 * directly; the helpers below are thin wrappers around them.
 */
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::size_t kMaxDepth = 8;

  /// Throws std::length_error for paths deeper than kMaxDepth.
  explicit RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path = {});
  RngStream(std::uint64_t master_seed, std::span<const std::uint64_t> path);

  /// Child stream at path + {tag}.
  RngStream split(std::uint64_t tag) const;
  RngStream split(Stage stage) const { return split(static_cast<std::uint64_t>(stage)); }

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::span<const std::uint64_t> path() const noexcept { return {path_.data(), depth_}; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Normal(mean, stddev); stddev == 0 returns mean without consuming draws.
  double normal(double mean, double stddev);
  /// Uniform index in [0, n). n must be > 0.
  std::size_t index(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  RngStream() = default;
  void push(std::uint64_t element);

  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, kMaxDepth> path_{};
  std::size_t depth_ = 0;
  std::uint64_t key_ = 0;  ///< hash of (seed, path)
  std::uint64_t state_ = 0;
};

}  // namespace tneat
