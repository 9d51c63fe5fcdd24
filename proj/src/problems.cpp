#include "tneat/problems.hpp"

#include <cmath>
#include <numbers>

#include "tneat/error.hpp"

namespace tneat {

std::vector<double> Problem::evaluate_population(std::span<const TransformedNetwork> nets,
                                                 const FunctionRegistry& registry,
                                                 const RngStream& rng, Execution mode) const {
  std::vector<double> fitness(nets.size());
  for_each_index(mode, nets.size(),
                 [&](std::size_t i) { fitness[i] = evaluate(nets[i], registry, rng.split(i)); });
  return fitness;
}

namespace {

void require_shape(const TransformedNetwork& net, const ProblemSpec& spec) {
  if (net.num_inputs != spec.inputs || net.num_outputs != spec.outputs) {
    throw ShapeMismatch("network has " + std::to_string(net.num_inputs) + " inputs/" +
                        std::to_string(net.num_outputs) + " outputs, problem needs " +
                        std::to_string(spec.inputs) + "/" + std::to_string(spec.outputs));
  }
}

// Runs forward_fn over every row of `inputs`, collecting a rows x 1 matrix.
Matrix apply_rows(const ForwardFn& forward_fn, const Matrix& inputs) {
  Matrix out(inputs.rows(), 1);
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    const std::vector<double> y = forward_fn(inputs.row(r));
    if (y.size() != 1) throw ShapeMismatch("expected a single output");
    out(r, 0) = y[0];
  }
  return out;
}

std::vector<double> map_networks(std::span<const TransformedNetwork> nets,
                                 const FunctionRegistry& registry, const Matrix& inputs,
                                 const ProblemSpec& spec, Execution mode,
                                 const std::function<double(const Matrix&)>& score) {
  for (const auto& net : nets) require_shape(net, spec);
  std::vector<double> fitness(nets.size());
  if (mode == Execution::parallel) {
    // One pass over the stacked population with a shared input batch.
    const std::vector<Matrix> outputs = population_forward(nets, registry, inputs, mode);
    for (std::size_t i = 0; i < nets.size(); ++i) fitness[i] = score(outputs[i]);
  } else {
    for (std::size_t i = 0; i < nets.size(); ++i) {
      fitness[i] = score(forward_batch(nets[i], registry, inputs));
    }
  }
  return fitness;
}

}  // namespace

// ---------------------------------------------------------------------------

const Matrix& xor_inputs() {
  static const Matrix m = [] {
    Matrix x(4, 2);
    x(1, 1) = 1.0;
    x(2, 0) = 1.0;
    x(3, 0) = 1.0;
    x(3, 1) = 1.0;
    return x;
  }();
  return m;
}

const std::vector<double>& xor_targets() {
  static const std::vector<double> t{0.0, 1.0, 1.0, 0.0};
  return t;
}

double xor_fitness(const Matrix& outputs) {
  const auto& t = xor_targets();
  double sse = 0.0;
  for (std::size_t r = 0; r < t.size(); ++r) {
    const double e = outputs(r, 0) - t[r];
    sse += e * e;
  }
  return 4.0 - sse;
}

double eval_xor(const ForwardFn& forward_fn) { return xor_fitness(apply_rows(forward_fn, xor_inputs())); }

double XorProblem::evaluate(const TransformedNetwork& net, const FunctionRegistry& registry,
                            RngStream) const {
  require_shape(net, spec());
  return xor_fitness(forward_batch(net, registry, xor_inputs()));
}

std::vector<double> XorProblem::evaluate_population(std::span<const TransformedNetwork> nets,
                                                    const FunctionRegistry& registry,
                                                    const RngStream&, Execution mode) const {
  return map_networks(nets, registry, xor_inputs(), spec(), mode, xor_fitness);
}

// ---------------------------------------------------------------------------

TargetFn regression_target(std::string_view name) {
  if (name == "sin") return [](double x) { return std::sin(x); };
  if (name == "cos") return [](double x) { return std::cos(x); };
  if (name == "square") return [](double x) { return x * x; };
  throw ConfigError("unknown regression_target '" + std::string(name) + "'");
}

std::vector<double> regression_grid(int samples) {
  if (samples < 2) throw ConfigError("regression_samples must be >= 2");
  std::vector<double> x(static_cast<std::size_t>(samples));
  const double lo = -std::numbers::pi;
  const double step = 2.0 * std::numbers::pi / (samples - 1);
  for (int i = 0; i < samples; ++i) x[static_cast<std::size_t>(i)] = lo + step * i;
  return x;
}

double regression_fitness(const Matrix& outputs, std::span<const double> targets) {
  double sse = 0.0;
  for (std::size_t r = 0; r < targets.size(); ++r) {
    const double e = outputs(r, 0) - targets[r];
    sse += e * e;
  }
  return -sse / static_cast<double>(targets.size());
}

double eval_regression(const ForwardFn& forward_fn, const TargetFn& target, int samples) {
  const std::vector<double> grid = regression_grid(samples);
  Matrix inputs(grid.size(), 1);
  std::vector<double> targets(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    inputs(i, 0) = grid[i];
    targets[i] = target(grid[i]);
  }
  return regression_fitness(apply_rows(forward_fn, inputs), targets);
}

RegressionProblem::RegressionProblem(std::string target_name, int samples)
    : target_name_(std::move(target_name)) {
  const TargetFn target = regression_target(target_name_);
  const std::vector<double> grid = regression_grid(samples);
  inputs_ = Matrix(grid.size(), 1);
  targets_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    inputs_(i, 0) = grid[i];
    targets_[i] = target(grid[i]);
  }
}

double RegressionProblem::evaluate(const TransformedNetwork& net,
                                   const FunctionRegistry& registry, RngStream) const {
  require_shape(net, spec());
  return regression_fitness(forward_batch(net, registry, inputs_), targets_);
}

std::vector<double> RegressionProblem::evaluate_population(
    std::span<const TransformedNetwork> nets, const FunctionRegistry& registry,
    const RngStream&, Execution mode) const {
  return map_networks(nets, registry, inputs_, spec(), mode,
                      [this](const Matrix& out) { return regression_fitness(out, targets_); });
}

// ---------------------------------------------------------------------------

bool is_terminal(const CartPoleState& s) {
  return std::fabs(s.x) > cartpole::kXLimit || std::fabs(s.theta) > cartpole::kThetaLimit ||
         s.steps >= cartpole::kMaxSteps;
}

CartPoleState cartpole_step(const CartPoleState& s, int direction) {
  using namespace cartpole;
  if (is_terminal(s)) throw TerminalState("cart-pole episode already finished");
  if (direction != 1 && direction != -1) throw InvalidInput("force direction must be -1 or +1");

  constexpr double total_mass = kCartMass + kPoleMass;
  constexpr double pole_mass_length = kPoleMass * kHalfLength;
  const double force = kForce * direction;
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);
  const double temp =
      (force + pole_mass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
  const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                           (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

  CartPoleState n;
  n.x = s.x + kDt * s.x_dot;
  n.x_dot = s.x_dot + kDt * x_acc;
  n.theta = s.theta + kDt * s.theta_dot;
  n.theta_dot = s.theta_dot + kDt * theta_acc;
  n.steps = s.steps + 1;
  return n;
}

CartPoleState cartpole_initial_state(RngStream& rng) {
  CartPoleState s;
  s.x = rng.uniform(-0.05, 0.05);
  s.x_dot = rng.uniform(-0.05, 0.05);
  s.theta = rng.uniform(-0.05, 0.05);
  s.theta_dot = rng.uniform(-0.05, 0.05);
  return s;
}

namespace {

int cartpole_action(const ForwardFn& forward_fn, const CartPoleState& s) {
  const double obs[4] = {s.x, s.x_dot, s.theta, s.theta_dot};
  const std::vector<double> y = forward_fn(obs);
  if (y.size() != 1) throw ShapeMismatch("expected a single output");
  return y[0] > 0.0 ? 1 : -1;
}

int cartpole_action(const TransformedNetwork& net, const FunctionRegistry& registry,
                    const CartPoleState& s) {
  const double obs[4] = {s.x, s.x_dot, s.theta, s.theta_dot};
  return forward(net, registry, obs)[0] > 0.0 ? 1 : -1;
}

}  // namespace

double eval_cartpole(const ForwardFn& forward_fn, RngStream rng) {
  CartPoleState s = cartpole_initial_state(rng);
  while (!is_terminal(s)) s = cartpole_step(s, cartpole_action(forward_fn, s));
  return static_cast<double>(s.steps);
}

double CartPoleProblem::evaluate(const TransformedNetwork& net, const FunctionRegistry& registry,
                                 RngStream rng) const {
  require_shape(net, spec());
  CartPoleState s = cartpole_initial_state(rng);
  while (!is_terminal(s)) s = cartpole_step(s, cartpole_action(net, registry, s));
  return static_cast<double>(s.steps);
}

std::vector<double> CartPoleProblem::evaluate_population(std::span<const TransformedNetwork> nets,
                                                         const FunctionRegistry& registry,
                                                         const RngStream& rng,
                                                         Execution mode) const {
  if (mode == Execution::serial) return Problem::evaluate_population(nets, registry, rng, mode);

  for (const auto& net : nets) require_shape(net, spec());
  std::vector<CartPoleState> states(nets.size());
  std::vector<std::size_t> running(nets.size());
  for (std::size_t i = 0; i < nets.size(); ++i) {
    RngStream g = rng.split(i);
    states[i] = cartpole_initial_state(g);
    running[i] = i;
  }
  // Lockstep: every unfinished episode advances one step per sweep.
  while (!running.empty()) {
    for_each_index(mode, running.size(), [&](std::size_t r) {
      const std::size_t i = running[r];
      states[i] = cartpole_step(states[i], cartpole_action(nets[i], registry, states[i]));
    });
    std::erase_if(running, [&](std::size_t i) { return is_terminal(states[i]); });
  }
  std::vector<double> fitness(nets.size());
  for (std::size_t i = 0; i < nets.size(); ++i) fitness[i] = static_cast<double>(states[i].steps);
  return fitness;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Problem> make_problem(const NeatConfig& config) {
  if (config.problem == "xor") return std::make_unique<XorProblem>();
  if (config.problem == "regression") {
    return std::make_unique<RegressionProblem>(config.regression_target,
                                               config.regression_samples);
  }
  if (config.problem == "cartpole") return std::make_unique<CartPoleProblem>();
  throw ConfigError("unknown problem '" + config.problem + "'");
}

NeatConfig resolve_io(NeatConfig config, const Problem& problem) {
  const ProblemSpec spec = problem.spec();
  if (config.inputs == 0) config.inputs = spec.inputs;
  if (config.outputs == 0) config.outputs = spec.outputs;
  if (config.inputs != spec.inputs || config.outputs != spec.outputs) {
    throw ConfigError("problem '" + std::string(problem.name()) + "' needs inputs = " +
                      std::to_string(spec.inputs) + " and outputs = " +
                      std::to_string(spec.outputs));
  }
  return config;
}

}  // namespace tneat
