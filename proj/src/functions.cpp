#include "tneat/functions.hpp"

#include <algorithm>
#include <cmath>

#include "tneat/error.hpp"

namespace tneat {

namespace {

double act_identity(double x) { return x; }
double act_tanh(double x) { return std::tanh(x); }
double act_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double act_relu(double x) { return x > 0.0 ? x : 0.0; }
double act_sin(double x) { return std::sin(x); }
double act_gauss(double x) { return std::exp(-x * x); }
double act_abs(double x) { return std::fabs(x); }

double agg_sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double agg_product(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

double agg_max(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return *std::max_element(v.begin(), v.end());
}

double agg_mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return agg_sum(v) / static_cast<double>(v.size());
}

FunctionRegistry make_builtin() {
  FunctionRegistry r;
  r.add_activation("identity", act_identity);
  r.add_activation("tanh", act_tanh);
  r.add_activation("sigmoid", act_sigmoid);
  r.add_activation("relu", act_relu);
  r.add_activation("sin", act_sin);
  r.add_activation("gauss", act_gauss);
  r.add_activation("abs", act_abs);
  r.add_aggregation("sum", agg_sum);
  r.add_aggregation("product", agg_product);
  r.add_aggregation("max", agg_max);
  r.add_aggregation("mean", agg_mean);
  return r;
}

}  // namespace

const FunctionRegistry& FunctionRegistry::builtin() {
  static const FunctionRegistry registry = make_builtin();
  return registry;
}

int FunctionRegistry::add_activation(std::string name, ActivationFn fn) {
  activations_.push_back({std::move(name), fn});
  return static_cast<int>(activations_.size() - 1);
}

int FunctionRegistry::add_aggregation(std::string name, AggregationFn fn) {
  aggregations_.push_back({std::move(name), fn});
  return static_cast<int>(aggregations_.size() - 1);
}

double FunctionRegistry::activate(int id, double x) const {
  if (id < 0 || static_cast<std::size_t>(id) >= activations_.size()) {
    throw InvalidInput("unknown activation id " + std::to_string(id));
  }
  return activations_[static_cast<std::size_t>(id)].fn(x);
}

double FunctionRegistry::aggregate(int id, std::span<const double> values) const {
  if (id < 0 || static_cast<std::size_t>(id) >= aggregations_.size()) {
    throw InvalidInput("unknown aggregation id " + std::to_string(id));
  }
  return aggregations_[static_cast<std::size_t>(id)].fn(values);
}

const std::string& FunctionRegistry::activation_name(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= activations_.size()) {
    throw InvalidInput("unknown activation id " + std::to_string(id));
  }
  return activations_[static_cast<std::size_t>(id)].name;
}

const std::string& FunctionRegistry::aggregation_name(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= aggregations_.size()) {
    throw InvalidInput("unknown aggregation id " + std::to_string(id));
  }
  return aggregations_[static_cast<std::size_t>(id)].name;
}

std::optional<int> FunctionRegistry::find_activation(std::string_view name) const {
  for (std::size_t i = 0; i < activations_.size(); ++i) {
    if (activations_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> FunctionRegistry::find_aggregation(std::string_view name) const {
  for (std::size_t i = 0; i < aggregations_.size(); ++i) {
    if (aggregations_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace tneat
