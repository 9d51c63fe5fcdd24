#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tneat/config.hpp"
#include "tneat/execution.hpp"
#include "tneat/functions.hpp"
#include "tneat/matrix.hpp"
#include "tneat/network.hpp"
#include "tneat/rng.hpp"

namespace tneat {

struct ProblemSpec {
  int inputs = 0;
  int outputs = 0;
  bool episodic = false;
};

/// Maps one input vector to one output vector.
using ForwardFn = std::function<std::vector<double>(std::span<const double>)>;

/*!
 * A fitness function over feedforward networks. Higher is better.
 *
 * evaluate() scores one network; `rng` is that genome's own stream.
 * evaluate_population() must agree with evaluate() elementwise and bitwise;
 * the default maps evaluate() over the population with network i receiving
 * rng.split(i).
 */
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string_view name() const = 0;
  virtual ProblemSpec spec() const = 0;
  virtual double evaluate(const TransformedNetwork& net, const FunctionRegistry& registry,
                          RngStream rng) const = 0;
  virtual std::vector<double> evaluate_population(std::span<const TransformedNetwork> nets,
                                                  const FunctionRegistry& registry,
                                                  const RngStream& rng, Execution mode) const;
};

// ---------------------------------------------------------------------------
// XOR: 2 inputs, 1 output, fitness 4 - sum of squared errors.

const Matrix& xor_inputs();
const std::vector<double>& xor_targets();
double eval_xor(const ForwardFn& forward_fn);
/// Fitness from the 4 x 1 output batch for xor_inputs().
double xor_fitness(const Matrix& outputs);

class XorProblem : public Problem {
 public:
  std::string_view name() const override { return "xor"; }
  ProblemSpec spec() const override { return {2, 1, false}; }
  double evaluate(const TransformedNetwork& net, const FunctionRegistry& registry,
                  RngStream rng) const override;
  std::vector<double> evaluate_population(std::span<const TransformedNetwork> nets,
                                          const FunctionRegistry& registry, const RngStream& rng,
                                          Execution mode) const override;
};

// ---------------------------------------------------------------------------
// Regression: 1 input, 1 output, fitness -MSE over evenly spaced samples on
// [-pi, pi].

using TargetFn = std::function<double(double)>;

/// "sin", "cos" or "square". Throws ConfigError otherwise.
TargetFn regression_target(std::string_view name);
std::vector<double> regression_grid(int samples);
double eval_regression(const ForwardFn& forward_fn, const TargetFn& target, int samples);
double regression_fitness(const Matrix& outputs, std::span<const double> targets);

class RegressionProblem : public Problem {
 public:
  RegressionProblem(std::string target_name, int samples);

  std::string_view name() const override { return "regression"; }
  ProblemSpec spec() const override { return {1, 1, false}; }
  double evaluate(const TransformedNetwork& net, const FunctionRegistry& registry,
                  RngStream rng) const override;
  std::vector<double> evaluate_population(std::span<const TransformedNetwork> nets,
                                          const FunctionRegistry& registry, const RngStream& rng,
                                          Execution mode) const override;

 private:
  std::string target_name_;
  Matrix inputs_;
  std::vector<double> targets_;
};

// ---------------------------------------------------------------------------
// Cart-pole balancing: 4 inputs (x, x_dot, theta, theta_dot), 1 output,
// fitness = steps survived (at most kCartPoleMaxSteps).

struct CartPoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  int steps = 0;

  friend bool operator==(const CartPoleState&, const CartPoleState&) = default;
};

namespace cartpole {
inline constexpr double kGravity = 9.8;
inline constexpr double kCartMass = 1.0;
inline constexpr double kPoleMass = 0.1;
inline constexpr double kHalfLength = 0.5;
inline constexpr double kForce = 10.0;
inline constexpr double kDt = 0.02;
inline constexpr double kXLimit = 2.4;
inline constexpr double kThetaLimit = 12.0 * 3.14159265358979323846 / 180.0;
inline constexpr int kMaxSteps = 500;
}  // namespace cartpole

bool is_terminal(const CartPoleState& s);
/// One explicit Euler step. direction is -1 or +1. Throws TerminalState.
CartPoleState cartpole_step(const CartPoleState& s, int direction);
/// Each component uniform in [-0.05, 0.05).
CartPoleState cartpole_initial_state(RngStream& rng);
double eval_cartpole(const ForwardFn& forward_fn, RngStream rng);

/// Under Execution::parallel all episodes advance in lockstep, one batched
/// step per timestep with finished episodes frozen; under serial each episode
/// runs to completion in turn.
class CartPoleProblem : public Problem {
 public:
  std::string_view name() const override { return "cartpole"; }
  ProblemSpec spec() const override { return {4, 1, true}; }
  double evaluate(const TransformedNetwork& net, const FunctionRegistry& registry,
                  RngStream rng) const override;
  std::vector<double> evaluate_population(std::span<const TransformedNetwork> nets,
                                          const FunctionRegistry& registry, const RngStream& rng,
                                          Execution mode) const override;
};

/// Built from config.problem ("xor", "regression", "cartpole").
std::unique_ptr<Problem> make_problem(const NeatConfig& config);

/// Fills zero inputs/outputs from the problem; ConfigError if non-zero
/// values disagree with it.
NeatConfig resolve_io(NeatConfig config, const Problem& problem);

}  // namespace tneat
