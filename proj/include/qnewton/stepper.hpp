#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "qnewton/linalg.hpp"
#include "qnewton/objective.hpp"
#include "qnewton/vec.hpp"

// The optimizer: a modified Newton family that shifts the Hessian by
// delta*||grad||^tau before inverting and flips the step components living in
// negative-curvature directions, so saddle points repel the iteration instead
// of attracting it. Variants:
//
//   NQN     full shifted-Newton step with curvature flip, fixed gamma = 1
//   NQNB    same direction, capped to unit length, with backtracking (tau > 1)
//   NQNB_S  NQNB without the unit-length cap
//   G       generalized form: any tau > 0 and a pluggable orthonormal basis
//
// The G direction is w = sum_i <grad, e_i> / ||A e_i|| * e_i over the chosen
// basis; with the eigenbasis of A this reproduces the NQN direction, and with
// a gradient-aligned basis it degenerates to rescaled gradient descent.

namespace qn {

enum class Variant { NQN, NQNB, NQNB_S, G };

enum class BasisKind { Eigen, Fixed, GradientAligned, Hybrid };

struct BasisStrategy {
  BasisKind kind = BasisKind::Eigen;

  // Constant basis for Fixed (and the Hybrid fallback); standard basis when
  // absent. fixed_fn generalizes Fixed to a point-dependent basis; keeping it
  // smooth is the caller's obligation.
  std::optional<OrthonormalBasis> fixed;
  std::function<OrthonormalBasis(const Vector&)> fixed_fn;

  // Hybrid picks the eigenbasis when minsp(A) >= kappa*||grad||^hybrid_exponent.
  double hybrid_exponent = 0.5;
};

struct StepperConfig {
  Variant variant = Variant::G;
  double tau = 1.0;

  // m+1 pairwise-distinct shift multipliers; delta 0 first by convention.
  // Empty means "generate from delta_seed when the dimension is known".
  std::vector<double> deltas;
  // Half the minimum pairwise delta gap; 0 means "derive from deltas".
  double kappa = 0.0;

  double gamma0 = 1.0;
  double armijo_constant = 1.0 / 3.0;
  double backtrack_factor = 1.0 / 3.0;
  int armijo_cap = 100;

  BasisStrategy basis;
  bool normalize_step = true;

  int max_iterations = 10000;
  double grad_tolerance = 1e-10;
  double divergence_bound = 1e8;

  // When set, each step draws delta uniformly from [-1,1] (no admissibility
  // scan) and reports delta_index = -1.
  bool random_delta_mode = false;
  std::uint64_t delta_seed = 12345;

  static StepperConfig defaults(Variant v);

  // Applies variant forcings, generates deltas from delta_seed if absent,
  // derives kappa, validates. Throws std::invalid_argument naming the
  // violated invariant.
  StepperConfig resolved(int dim) const;
  void validate(int dim) const;
};

// delta_0 = 0 plus m draws without replacement from the grid
// {k/(2m) : k in [-2m, 2m], k != 0}, so pairwise gaps stay >= 1/(2m).
std::vector<double> generate_deltas(int dim, std::uint64_t seed);

double recompute_kappa(const std::vector<double>& deltas);

struct StepOutcome {
  Vector x_next;
  int delta_index = 0;  // -1 in random_delta_mode
  double gamma = 0.0;   // exactly 1 for variant NQN
  Vector w;
  Vector w_hat;
  int armijo_trials = 0;
  double directional_derivative = 0.0;  // <w_hat, grad f(x)>, positive
  double cond_ratio = 1.0;  // min/max of ||A e_i|| over basis directions seen by grad
};

struct DeltaSelection {
  int delta_index = 0;
  SymmetricMatrix a;
};

// First j (in config order) whose shifted matrix hess + delta_j*g^tau*Id has
// minsp >= kappa*g^tau; equality passes. Throws NumericError when no delta
// qualifies (cannot happen for valid configs with exact arithmetic).
DeltaSelection select_delta(const SymmetricMatrix& hess, double grad_norm, const StepperConfig& config);

// Uniform delta in [-1,1] from rng, no admissibility scan, index -1.
DeltaSelection select_delta_random(const SymmetricMatrix& hess, double grad_norm,
                                   const StepperConfig& config, std::mt19937_64& rng);

// Basis for the step at x per config.basis. Eigen uses eigenvectors of hess
// (same as of A, which is hess plus a multiple of Id).
OrthonormalBasis build_basis(const SymmetricMatrix& a, const SymmetricMatrix& hess,
                             const Vector& grad, const Vector& x, const StepperConfig& config);

// w = sum_i <grad, e_i>/||A e_i|| e_i; terms with <grad,e_i> = 0 are skipped,
// and a needed ||A e_i|| <= 1e-300 raises NumericError.
Vector step_direction(const SymmetricMatrix& a, const Vector& grad, const OrthonormalBasis& basis);

// Solves A v = grad and returns the positive-eigenspace part minus the
// negative-eigenspace part. Requires A invertible (std::domain_error).
Vector nqn_direction(const SymmetricMatrix& a, const Vector& grad);

struct ArmijoResult {
  double gamma = 0.0;
  int trials = 0;  // number of backtracks taken before acceptance
};

// Backtracking from gamma0: accept gamma once
// f(x - gamma*w_hat) - f(x) <= -armijo_constant * gamma * <w_hat, grad f(x)>,
// shrinking by backtrack_factor otherwise. NumericError past armijo_cap.
ArmijoResult armijo_search(const CostFunction& f, const Vector& x, const Vector& w_hat,
                           const StepperConfig& config);

// One full step from x (gradient must be nonzero). Pass rng for
// random_delta_mode; without one, a stream seeded from delta_seed is used.
StepOutcome take_step(const CostFunction& f, const Vector& x, const StepperConfig& config,
                      std::mt19937_64* rng = nullptr);

enum class Termination { GradToleranceMet, MaxIterations, Diverged, NumericFailure };

const char* to_string(Termination t);

struct IterationRecord {
  int iteration = 0;
  Vector x;  // iterate the step started from
  double f_value = 0.0;
  double grad_norm = 0.0;
  StepOutcome outcome;
  std::int64_t wall_time_ns = 0;
};

struct RunResult {
  std::vector<IterationRecord> trace;
  Termination termination = Termination::MaxIterations;
  CriticalPointReport final_report;
  Vector final_x;
  double final_f = 0.0;

  // Resolved randomness, echoed for reproducibility.
  std::uint64_t delta_seed = 0;
  std::vector<double> deltas;
  double kappa = 0.0;

  int iterations() const { return static_cast<int>(trace.size()); }
};

// Iterates take_step from x0 until the gradient norm falls to grad_tolerance,
// ||x|| exceeds divergence_bound, max_iterations is hit, or a numeric guard
// trips; failures are encoded in the termination, never thrown.
RunResult run(const CostFunction& f, const Vector& x0, const StepperConfig& config);

// Least-squares slope of log e_{n+1} against log e_n over consecutive pairs
// with both errors in (1e-13, 1e-2]; needs at least two such pairs, else
// InsufficientDataError.
double estimate_order_from_errors(const std::vector<double>& errors);

// Same, with errors taken as distances of the run's iterates (including the
// terminal point) from x_star.
double estimate_order(const RunResult& result, const Vector& x_star);

namespace detail {
// Step core reusing an already-computed gradient (run() calls this to avoid
// re-evaluating).
StepOutcome take_step_with_grad(const CostFunction& f, const Vector& x, const Vector& grad,
                                const StepperConfig& config, std::mt19937_64* rng);
}  // namespace detail

}  // namespace qn
