#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tneat {

// Built-in function codes as stored in the node tensor.
namespace activation {
inline constexpr int identity = 0;
inline constexpr int tanh = 1;
inline constexpr int sigmoid = 2;
inline constexpr int relu = 3;
inline constexpr int sin = 4;
inline constexpr int gauss = 5;
inline constexpr int abs = 6;
}  // namespace activation

namespace aggregation {
inline constexpr int sum = 0;
inline constexpr int product = 1;
inline constexpr int max = 2;
inline constexpr int mean = 3;
}  // namespace aggregation

using ActivationFn = double (*)(double);
/// Aggregation over an arbitrary number of incoming values. Must return 0 for
/// an empty span.
using AggregationFn = double (*)(std::span<const double>);

/*!
 * Id-indexed tables of node activation and aggregation functions.
 *
 * Ids are dense from 0. The built-in registry is immutable and shared; custom
 * registries may append functions after the built-ins.
 */
class FunctionRegistry {
 public:
  struct Activation {
    std::string name;
    ActivationFn fn;
  };
  struct Aggregation {
    std::string name;
    AggregationFn fn;
  };

  static const FunctionRegistry& builtin();

  int add_activation(std::string name, ActivationFn fn);
  int add_aggregation(std::string name, AggregationFn fn);

  std::size_t activation_count() const noexcept { return activations_.size(); }
  std::size_t aggregation_count() const noexcept { return aggregations_.size(); }

  /// Throws InvalidInput for an unknown id.
  double activate(int id, double x) const;
  double aggregate(int id, std::span<const double> values) const;

  const std::string& activation_name(int id) const;
  const std::string& aggregation_name(int id) const;
  std::optional<int> find_activation(std::string_view name) const;
  std::optional<int> find_aggregation(std::string_view name) const;

 private:
  std::vector<Activation> activations_;
  std::vector<Aggregation> aggregations_;
};

}  // namespace tneat
