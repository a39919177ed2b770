#include "qnewton/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qnewton/errors.hpp"

namespace qn {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::GradToleranceMet: return "grad_tolerance_met";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::Diverged: return "diverged";
    case Termination::NumericFailure: return "numeric_failure";
  }
  return "?";
}

StepperConfig StepperConfig::defaults(Variant v) {
  StepperConfig c;
  c.variant = v;
  switch (v) {
    case Variant::G:
      c.tau = 1.0;
      break;
    case Variant::NQNB:
      c.tau = 1.5;
      c.basis.kind = BasisKind::Eigen;
      c.normalize_step = true;
      break;
    case Variant::NQNB_S:
      c.tau = 1.5;
      c.basis.kind = BasisKind::Eigen;
      c.normalize_step = false;
      break;
    case Variant::NQN:
      c.tau = 1.5;
      c.basis.kind = BasisKind::Eigen;
      c.normalize_step = false;  // full step, as in the plain variant
      break;
  }
  return c;
}

std::vector<double> generate_deltas(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("generate_deltas: dim must be >= 1");
  const int m = dim;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(4 * m));
  for (int k = -2 * m; k <= 2 * m; ++k)
    if (k != 0) grid.push_back(static_cast<double>(k) / (2.0 * m));

  // Partial Fisher-Yates with explicit index draws so the sequence is
  // identical on every platform.
  std::mt19937_64 rng(seed);
  std::vector<double> out{0.0};
  out.reserve(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i < m; ++i) {
    const std::size_t span = grid.size() - static_cast<std::size_t>(i);
    const std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % span);
    std::swap(grid[static_cast<std::size_t>(i)], grid[j]);
    out.push_back(grid[static_cast<std::size_t>(i)]);
  }
  return out;
}

double recompute_kappa(const std::vector<double>& deltas) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < deltas.size(); ++i)
    for (std::size_t j = i + 1; j < deltas.size(); ++j)
      gap = std::min(gap, std::abs(deltas[i] - deltas[j]));
  return 0.5 * gap;
}

StepperConfig StepperConfig::resolved(int dim) const {
  StepperConfig c = *this;
  switch (c.variant) {
    case Variant::NQNB:
      c.basis.kind = BasisKind::Eigen;
      c.normalize_step = true;
      break;
    case Variant::NQNB_S:
      c.basis.kind = BasisKind::Eigen;
      c.normalize_step = false;
      break;
    default:
      break;
  }
  if (c.deltas.empty()) c.deltas = generate_deltas(dim, c.delta_seed);
  const double derived = recompute_kappa(c.deltas);
  if (c.kappa == 0.0) c.kappa = derived;
  c.validate(dim);
  return c;
}

void StepperConfig::validate(int dim) const {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if ((variant == Variant::NQNB || variant == Variant::NQNB_S) && !(tau > 1.0))
    throw std::invalid_argument("variants NQNB and NQNB_S require tau > 1");
  if (variant == Variant::NQNB && (basis.kind != BasisKind::Eigen || !normalize_step))
    throw std::invalid_argument("variant NQNB requires the eigenbasis and normalize_step=true");
  if (variant == Variant::NQNB_S && (basis.kind != BasisKind::Eigen || normalize_step))
    throw std::invalid_argument("variant NQNB_S requires the eigenbasis and normalize_step=false");
  if (deltas.size() != static_cast<std::size_t>(dim) + 1)
    throw std::invalid_argument("deltas must contain exactly dim+1 values");
  for (std::size_t i = 0; i < deltas.size(); ++i)
    for (std::size_t j = i + 1; j < deltas.size(); ++j)
      if (deltas[i] == deltas[j]) throw std::invalid_argument("deltas must be pairwise distinct");
  const double derived = recompute_kappa(deltas);
  if (!(kappa > 0.0) || std::abs(kappa - derived) > 1e-12 * std::max(1.0, derived))
    throw std::invalid_argument("kappa must equal half the minimum pairwise delta gap");
  if (!(gamma0 > 0.0) || gamma0 > 1.0) throw std::invalid_argument("gamma0 must lie in (0, 1]");
  if (!(armijo_constant > 0.0) || armijo_constant >= 1.0)
    throw std::invalid_argument("armijo_constant must lie in (0, 1)");
  if (!(backtrack_factor > 0.0) || backtrack_factor >= 1.0)
    throw std::invalid_argument("backtrack_factor must lie in (0, 1)");
  if (armijo_cap < 1) throw std::invalid_argument("armijo_cap must be >= 1");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (grad_tolerance < 0.0) throw std::invalid_argument("grad_tolerance must be >= 0");
  if (!(divergence_bound > 0.0)) throw std::invalid_argument("divergence_bound must be > 0");
  if (!(basis.hybrid_exponent > 0.0)) throw std::invalid_argument("hybrid_exponent must be > 0");
  if (basis.fixed && basis.fixed->dim() != dim)
    throw std::invalid_argument("fixed basis dimension does not match the problem");
}

namespace {

// minsp of hess + shift*Id straight from hess's eigenvalues.
double shifted_minsp(const Vector& eigenvalues, double shift) {
  double lo = std::numeric_limits<double>::infinity();
  for (double lambda : eigenvalues) lo = std::min(lo, std::abs(lambda + shift));
  return lo;
}

int pick_delta_index(const Vector& eigenvalues, double grad_norm, const StepperConfig& config) {
  const double gpow = std::pow(grad_norm, config.tau);
  const double floor = config.kappa * gpow;
  for (std::size_t j = 0; j < config.deltas.size(); ++j)
    if (shifted_minsp(eigenvalues, config.deltas[j] * gpow) >= floor) return static_cast<int>(j);
  throw NumericError("select_delta: no delta passed the admissibility test");
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

OrthonormalBasis fixed_basis_for(const StepperConfig& config, const Vector& x, int dim) {
  if (config.basis.fixed_fn) {
    OrthonormalBasis b = config.basis.fixed_fn(x);
    if (b.dim() != dim) throw std::invalid_argument("fixed_fn basis dimension mismatch");
    return b;
  }
  if (config.basis.fixed) return *config.basis.fixed;
  return OrthonormalBasis::standard(dim);
}

}  // namespace

DeltaSelection select_delta(const SymmetricMatrix& hess, double grad_norm,
                            const StepperConfig& config) {
  if (!(grad_norm > 0.0)) throw std::domain_error("select_delta requires a positive gradient norm");
  if (config.deltas.empty() || !(config.kappa > 0.0))
    throw std::invalid_argument("config has no resolved deltas; call resolved(dim) first");
  const EigenDecomposition eig = eigen_decompose(hess);
  const int j = pick_delta_index(eig.eigenvalues, grad_norm, config);
  const double shift = config.deltas[static_cast<std::size_t>(j)] * std::pow(grad_norm, config.tau);
  return DeltaSelection{j, hess.shifted(shift)};
}

DeltaSelection select_delta_random(const SymmetricMatrix& hess, double grad_norm,
                                   const StepperConfig& config, std::mt19937_64& rng) {
  if (!(grad_norm > 0.0)) throw std::domain_error("select_delta requires a positive gradient norm");
  const double delta = -1.0 + 2.0 * uniform_unit(rng);
  const double shift = delta * std::pow(grad_norm, config.tau);
  return DeltaSelection{-1, hess.shifted(shift)};
}

OrthonormalBasis build_basis(const SymmetricMatrix& a, const SymmetricMatrix& hess,
                             const Vector& grad, const Vector& x, const StepperConfig& config) {
  const int dim = hess.dim();
  switch (config.basis.kind) {
    case BasisKind::Eigen:
      return OrthonormalBasis(eigen_decompose(hess).eigenvectors);
    case BasisKind::Fixed:
      return fixed_basis_for(config, x, dim);
    case BasisKind::GradientAligned: {
      const double gn = norm(grad);
      if (!(gn > 0.0)) throw std::domain_error("gradient-aligned basis requires a nonzero gradient");
      return complete_to_orthonormal_basis(scaled(grad, 1.0 / gn));
    }
    case BasisKind::Hybrid: {
      const double threshold = config.kappa * std::pow(norm(grad), config.basis.hybrid_exponent);
      if (minsp(a) >= threshold) return OrthonormalBasis(eigen_decompose(hess).eigenvectors);
      return fixed_basis_for(config, x, dim);
    }
  }
  throw std::logic_error("unreachable basis kind");
}

Vector step_direction(const SymmetricMatrix& a, const Vector& grad, const OrthonormalBasis& basis) {
  if (basis.dim() != a.dim() || static_cast<int>(grad.size()) != a.dim())
    throw std::invalid_argument("step_direction: dimension mismatch");
  Vector w(grad.size(), 0.0);
  for (int i = 0; i < basis.dim(); ++i) {
    const Vector& e = basis[i];
    const double c = dot(grad, e);
    if (c == 0.0) continue;
    const double len = norm(a.apply(e));
    if (len <= 1e-300)
      throw NumericError("step_direction: basis direction annihilated by the shifted Hessian", len);
    for (std::size_t r = 0; r < w.size(); ++r) w[r] += (c / len) * e[r];
  }
  return w;
}

Vector nqn_direction(const SymmetricMatrix& a, const Vector& grad) {
  const EigenDecomposition eig = eigen_decompose(a);
  double lo = std::abs(eig.eigenvalues[0]);
  for (double lambda : eig.eigenvalues) lo = std::min(lo, std::abs(lambda));
  if (!(lo > 1e-12 * std::max(1.0, a.frobenius_norm())))
    throw std::domain_error("nqn_direction requires an invertible matrix");

  Vector v(grad.size(), 0.0);
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    const double c = dot(grad, eig.eigenvectors[k]) / eig.eigenvalues[k];
    for (std::size_t r = 0; r < v.size(); ++r) v[r] += c * eig.eigenvectors[k][r];
  }
  const SplitVectors split = spectral_split(a, v);
  return sub(split.plus, split.minus);
}

namespace {

ArmijoResult armijo_impl(const CostFunction& f, const Vector& x, const Vector& w_hat,
                         const Vector& grad, const StepperConfig& config) {
  const double d = dot(w_hat, grad);
  if (!(d > 0.0)) throw std::domain_error("armijo_search requires a descent direction");
  const double fx = f.eval(x);
  double gamma = config.gamma0;
  for (int trials = 0; trials <= config.armijo_cap; ++trials) {
    const double fnext = f.eval(add_scaled(x, -gamma, w_hat));
    if (fnext - fx <= -config.armijo_constant * gamma * d) return ArmijoResult{gamma, trials};
    gamma *= config.backtrack_factor;
  }
  throw NumericError("armijo_search: no acceptable step within the backtracking cap", gamma);
}

}  // namespace

ArmijoResult armijo_search(const CostFunction& f, const Vector& x, const Vector& w_hat,
                           const StepperConfig& config) {
  return armijo_impl(f, x, w_hat, f.grad(x), config);
}

namespace detail {

StepOutcome take_step_with_grad(const CostFunction& f, const Vector& x, const Vector& grad,
                                const StepperConfig& config, std::mt19937_64* rng) {
  const double gnorm = norm(grad);
  if (!(gnorm > 0.0)) throw std::domain_error("take_step requires a nonzero gradient");
  if (config.deltas.empty() || !(config.kappa > 0.0))
    throw std::invalid_argument("config has no resolved deltas; call resolved(dim) first");

  const SymmetricMatrix hess = f.hess(x);

  DeltaSelection sel = [&] {
    if (!config.random_delta_mode) return select_delta(hess, gnorm, config);
    if (rng) return select_delta_random(hess, gnorm, config, *rng);
    std::mt19937_64 local(config.delta_seed);
    return select_delta_random(hess, gnorm, config, local);
  }();

  StepOutcome out;
  out.delta_index = sel.delta_index;

  OrthonormalBasis basis = (config.variant == Variant::NQN)
                               ? OrthonormalBasis(eigen_decompose(hess).eigenvectors)
                               : build_basis(sel.a, hess, grad, x, config);
  out.w = (config.variant == Variant::NQN) ? nqn_direction(sel.a, grad)
                                           : step_direction(sel.a, grad, basis);

  out.w_hat = out.w;
  if (config.normalize_step) {
    const double wn = norm(out.w);
    if (wn > 1.0) out.w_hat = scaled(out.w, 1.0 / wn);
  }
  out.directional_derivative = dot(out.w_hat, grad);

  if (config.variant == Variant::NQN) {
    out.gamma = 1.0;
    out.armijo_trials = 0;
  } else {
    const ArmijoResult ar = armijo_impl(f, x, out.w_hat, grad, config);
    out.gamma = ar.gamma;
    out.armijo_trials = ar.trials;
  }
  out.x_next = add_scaled(x, -out.gamma, out.w_hat);

  // Diagnostic: spread of ||A e_i|| over the basis directions the gradient
  // actually touches.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    if (dot(grad, basis[i]) == 0.0) continue;
    const double len = norm(sel.a.apply(basis[i]));
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  out.cond_ratio = (hi > 0.0 && std::isfinite(lo)) ? lo / hi : 1.0;
  return out;
}

}  // namespace detail

StepOutcome take_step(const CostFunction& f, const Vector& x, const StepperConfig& config,
                      std::mt19937_64* rng) {
  return detail::take_step_with_grad(f, x, f.grad(x), config, rng);
}

RunResult run(const CostFunction& f, const Vector& x0, const StepperConfig& config) {
  const StepperConfig cfg = config.resolved(static_cast<int>(x0.size()));
  std::mt19937_64 rng(cfg.delta_seed);

  RunResult out;
  out.delta_seed = cfg.delta_seed;
  out.deltas = cfg.deltas;
  out.kappa = cfg.kappa;

  Vector x = x0;
  Termination term = Termination::MaxIterations;
  for (int k = 0; k < cfg.max_iterations; ++k) {
    const double fx = f.eval(x);
    const Vector grad = f.grad(x);
    const double gnorm = norm(grad);
    if (!std::isfinite(fx) || !all_finite(grad) || !all_finite(x)) {
      term = Termination::NumericFailure;
      break;
    }
    if (gnorm <= cfg.grad_tolerance) {
      term = Termination::GradToleranceMet;
      break;
    }
    if (norm(x) > cfg.divergence_bound) {
      term = Termination::Diverged;
      break;
    }

    const auto t0 = std::chrono::steady_clock::now();
    StepOutcome outcome;
    try {
      outcome = detail::take_step_with_grad(f, x, grad, cfg, &rng);
    } catch (const NumericError&) {
      term = Termination::NumericFailure;
      break;
    }
    const auto t1 = std::chrono::steady_clock::now();

    IterationRecord rec;
    rec.iteration = k;
    rec.x = x;
    rec.f_value = fx;
    rec.grad_norm = gnorm;
    rec.outcome = std::move(outcome);
    rec.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    out.trace.push_back(std::move(rec));
    x = out.trace.back().outcome.x_next;
  }

  // The loop cap can land exactly on a solution; report that honestly.
  if (term == Termination::MaxIterations && all_finite(x) &&
      norm(f.grad(x)) <= cfg.grad_tolerance)
    term = Termination::GradToleranceMet;

  out.termination = term;
  out.final_x = x;
  out.final_f = f.eval(x);
  out.final_report = classify_critical_point(f, x);
  return out;
}

double estimate_order_from_errors(const std::vector<double>& errors) {
  // Usable window: above the rounding floor, inside the asymptotic regime.
  constexpr double kFloor = 1e-13;
  constexpr double kCeil = 1e-2;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n = 0; n + 1 < errors.size(); ++n) {
    const double a = errors[n], b = errors[n + 1];
    if (a > kFloor && a <= kCeil && b > kFloor && b <= kCeil)
      pts.emplace_back(std::log(a), std::log(b));
  }
  if (pts.size() < 2)
    throw InsufficientDataError(
        "estimate_order: need at least three consecutive iterates with error in (1e-13, 1e-2]");

  double sx = 0.0, sy = 0.0;
  for (const auto& [px, py] : pts) {
    sx += px;
    sy += py;
  }
  const double mx = sx / static_cast<double>(pts.size());
  const double my = sy / static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [px, py] : pts) {
    sxx += (px - mx) * (px - mx);
    sxy += (px - mx) * (py - my);
  }
  if (!(sxx > 0.0))
    throw InsufficientDataError("estimate_order: errors in the window do not vary");
  return sxy / sxx;
}

double estimate_order(const RunResult& result, const Vector& x_star) {
  std::vector<double> errors;
  errors.reserve(result.trace.size() + 1);
  for (const IterationRecord& rec : result.trace) errors.push_back(distance(rec.x, x_star));
  errors.push_back(distance(result.final_x, x_star));
  return estimate_order_from_errors(errors);
}

}  // namespace qn
