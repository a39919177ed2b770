#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnewton/objective.hpp"
#include "qnewton/stepper.hpp"

// JSON run configuration. Flat keys; unknown keys are rejected so typos fail
// loudly instead of silently running with defaults. The `objective` value is
// either a corpus name (quadratic, rosenbrock, double_well_saddle,
// quartic_degenerate) or a path to a polynomial-system file.

namespace qn::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string objective;
  int dim = 2;  // used by corpus entries without an intrinsic dimension

  // Only meaningful when objective == "quadratic".
  std::optional<std::vector<std::vector<double>>> quadratic_q;
  std::optional<Vector> quadratic_b;

  Variant variant = Variant::G;
  std::optional<double> tau;
  std::optional<double> gamma0;
  std::optional<double> armijo_constant;
  std::optional<double> backtrack_factor;
  std::optional<std::string> basis_strategy;
  std::optional<std::vector<double>> deltas;
  std::optional<std::uint64_t> delta_seed;
  bool random_delta_mode = false;

  std::optional<Vector> x0;                       // run
  std::optional<std::array<double, 2>> start_box;  // bench
  std::optional<int> num_starts;
  std::optional<std::uint64_t> start_seed;

  std::optional<int> max_iterations;
  std::optional<double> grad_tolerance;
  std::optional<double> divergence_bound;

  std::optional<std::string> trace;    // run: trace CSV output path
  std::optional<std::string> summary;  // bench: summary CSV output path
};

RunConfig parse_run_config_text(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

CostFunction make_objective(const RunConfig& config);
StepperConfig make_stepper_config(const RunConfig& config);

}  // namespace qn::cli
