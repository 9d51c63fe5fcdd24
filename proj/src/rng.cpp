#include "tneat/rng.hpp"

#include <random>
#include <stdexcept>

namespace tneat {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
    : RngStream(master_seed, std::span<const std::uint64_t>(path.begin(), path.size())) {}

RngStream::RngStream(std::uint64_t master_seed, std::span<const std::uint64_t> path)
    : seed_(master_seed), key_(mix64(master_seed + kGolden)) {
  state_ = key_;
  for (std::uint64_t element : path) push(element);
}

void RngStream::push(std::uint64_t element) {
  if (depth_ == kMaxDepth) throw std::length_error("RngStream path too deep");
  path_[depth_++] = element;
  // Depth is mixed in so that (a, b) and (b, a) land on unrelated keys.
  key_ = mix64(key_ ^ mix64(element + depth_ * kGolden));
  state_ = key_;
}

RngStream RngStream::split(std::uint64_t tag) const {
  RngStream child;
  child.seed_ = seed_;
  child.path_ = path_;
  child.depth_ = depth_;
  child.key_ = key_;
  child.push(tag);
  return child;
}

RngStream::result_type RngStream::operator()() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::normal(double mean, double stddev) {
  if (stddev == 0.0) {
    return mean;
  }
  std::normal_distribution<double> dist(mean, stddev);
  return dist(*this);
}

std::size_t RngStream::index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(*this);
}

}  // namespace tneat
