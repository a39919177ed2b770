#include "qnewton/polysys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace qn {

namespace {

void check_exponents(int num_vars, const std::vector<int>& exps) {
  if (static_cast<int>(exps.size()) != num_vars)
    throw std::invalid_argument("monomial exponent count does not match num_vars");
  for (int e : exps)
    if (e < 0) throw std::invalid_argument("monomial exponents must be non-negative");
}

}  // namespace

Polynomial::Polynomial(int num_vars, std::vector<Monomial> terms) : num_vars_(num_vars) {
  if (num_vars < 1) throw std::invalid_argument("polynomial needs at least one variable");
  std::map<std::vector<int>, double> combined;
  for (Monomial& t : terms) {
    check_exponents(num_vars, t.exponents);
    combined[std::move(t.exponents)] += t.coeff;
  }
  for (auto& [exps, coeff] : combined)
    if (coeff != 0.0) monomials_.push_back(Monomial{coeff, exps});
}

Polynomial Polynomial::constant(int num_vars, double c) {
  return Polynomial(num_vars, {Monomial{c, std::vector<int>(static_cast<std::size_t>(num_vars), 0)}});
}

int Polynomial::degree() const {
  int d = 0;
  for (const Monomial& t : monomials_)
    d = std::max(d, std::accumulate(t.exponents.begin(), t.exponents.end(), 0));
  return d;
}

double poly_eval(const Polynomial& p, const Vector& x) {
  if (static_cast<int>(x.size()) != p.num_vars())
    throw std::invalid_argument("point dimension does not match polynomial");
  double value = 0.0;
  for (const Monomial& t : p.monomials()) {
    double term = t.coeff;
    for (std::size_t v = 0; v < x.size(); ++v)
      for (int k = 0; k < t.exponents[v]; ++k) term *= x[v];
    value += term;
  }
  return value;
}

Polynomial poly_diff(const Polynomial& p, int var) {
  if (var < 0 || var >= p.num_vars()) throw std::invalid_argument("poly_diff: variable out of range");
  std::vector<Monomial> terms;
  for (const Monomial& t : p.monomials()) {
    const int e = t.exponents[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial d = t;
    d.coeff *= static_cast<double>(e);
    d.exponents[static_cast<std::size_t>(var)] = e - 1;
    terms.push_back(std::move(d));
  }
  return Polynomial(p.num_vars(), std::move(terms));
}

PolySystem::PolySystem(std::vector<Polynomial> polys) : polys_(std::move(polys)) {
  if (polys_.empty()) throw std::invalid_argument("polynomial system must be non-empty");
  num_vars_ = polys_.front().num_vars();
  for (const Polynomial& p : polys_)
    if (p.num_vars() != num_vars_)
      throw std::invalid_argument("all system polynomials must share the variable count");
}

int PolySystem::cost_degree() const {
  int d = 0;
  for (const Polynomial& p : polys_) d = std::max(d, p.degree());
  return 2 * d;
}

CostFunction system_cost(const PolySystem& sys) {
  const int m = sys.num_vars();

  struct Tables {
    std::vector<Polynomial> p;
    std::vector<std::vector<Polynomial>> dp;                // [i][j] = dP_i/dx_j
    std::vector<std::vector<std::vector<Polynomial>>> d2p;  // [i][j][k<=j]
  };
  auto tables = std::make_shared<Tables>();
  tables->p = sys.polynomials();
  for (const Polynomial& p : tables->p) {
    std::vector<Polynomial> grad_row;
    grad_row.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) grad_row.push_back(poly_diff(p, j));
    std::vector<std::vector<Polynomial>> hess_row;
    for (int j = 0; j < m; ++j) {
      std::vector<Polynomial> row;
      row.reserve(static_cast<std::size_t>(j) + 1);
      for (int k = 0; k <= j; ++k) row.push_back(poly_diff(grad_row[static_cast<std::size_t>(j)], k));
      hess_row.push_back(std::move(row));
    }
    tables->dp.push_back(std::move(grad_row));
    tables->d2p.push_back(std::move(hess_row));
  }

  CostFunction f;
  f.dim = m;
  f.label = "polynomial_system";
  f.eval = [tables](const Vector& x) {
    double s = 0.0;
    for (const Polynomial& p : tables->p) {
      const double v = poly_eval(p, x);
      s += v * v;
    }
    return s;
  };
  f.grad = [tables, m](const Vector& x) {
    Vector g(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < tables->p.size(); ++i) {
      const double v = poly_eval(tables->p[i], x);
      for (int j = 0; j < m; ++j)
        g[static_cast<std::size_t>(j)] += 2.0 * v * poly_eval(tables->dp[i][static_cast<std::size_t>(j)], x);
    }
    return g;
  };
  f.hess = [tables, m](const Vector& x) {
    std::vector<double> entries(static_cast<std::size_t>(m) * m, 0.0);
    for (std::size_t i = 0; i < tables->p.size(); ++i) {
      const double v = poly_eval(tables->p[i], x);
      Vector dpx(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j)
        dpx[static_cast<std::size_t>(j)] = poly_eval(tables->dp[i][static_cast<std::size_t>(j)], x);
      for (int j = 0; j < m; ++j)
        for (int k = 0; k <= j; ++k) {
          const double h2 = poly_eval(tables->d2p[i][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)], x);
          const double val =
              2.0 * (dpx[static_cast<std::size_t>(j)] * dpx[static_cast<std::size_t>(k)] + v * h2);
          entries[static_cast<std::size_t>(j) * m + k] += val;
          if (j != k) entries[static_cast<std::size_t>(k) * m + j] += val;
        }
    }
    return SymmetricMatrix(m, std::move(entries));
  };
  return f;
}

double exponent_bound_r(int num_vars, int cost_degree) {
  if (num_vars < 1) throw std::domain_error("exponent_bound_r: need at least one variable");
  if (cost_degree < 2) throw std::domain_error("exponent_bound_r: cost degree must be >= 2");
  const double d = static_cast<double>(cost_degree);
  double r = d;
  for (int i = 1; i < num_vars; ++i) {
    r *= 3.0 * d - 3.0;
    if (r > 1e300) return std::numeric_limits<double>::infinity();
  }
  return r;
}

double tau0_for_degree(int num_vars, int cost_degree) {
  const double r = exponent_bound_r(num_vars, cost_degree);
  if (std::isfinite(r)) return 0.99 / (r - 1.0);
  // log-space fallback: R - 1 ~ R, so tau ~ 0.99 * exp(-log R)
  const double d = static_cast<double>(cost_degree);
  const double log_r = std::log(d) + static_cast<double>(num_vars - 1) * std::log(3.0 * d - 3.0);
  const double tau = 0.99 * std::exp(-log_r);
  return tau > 0.0 ? tau : std::numeric_limits<double>::denorm_min();
}

double tau0(const PolySystem& sys) { return tau0_for_degree(sys.num_vars(), sys.cost_degree()); }

ComplexPolynomial::ComplexPolynomial(int num_vars, std::vector<ComplexMonomial> terms)
    : num_vars_(num_vars) {
  if (num_vars < 1) throw std::invalid_argument("polynomial needs at least one variable");
  std::map<std::vector<int>, std::complex<double>> combined;
  for (ComplexMonomial& t : terms) {
    check_exponents(num_vars, t.exponents);
    combined[std::move(t.exponents)] += t.coeff;
  }
  for (auto& [exps, coeff] : combined)
    if (coeff != std::complex<double>(0.0, 0.0)) monomials_.push_back(ComplexMonomial{coeff, exps});
}

std::complex<double> ComplexPolynomial::eval(const std::vector<std::complex<double>>& z) const {
  if (static_cast<int>(z.size()) != num_vars_)
    throw std::invalid_argument("point dimension does not match polynomial");
  std::complex<double> value = 0.0;
  for (const ComplexMonomial& t : monomials_) {
    std::complex<double> term = t.coeff;
    for (std::size_t v = 0; v < z.size(); ++v)
      for (int k = 0; k < t.exponents[v]; ++k) term *= z[v];
    value += term;
  }
  return value;
}

PolySystem complex_to_real(const std::vector<ComplexPolynomial>& polys) {
  if (polys.empty()) throw std::invalid_argument("complex_to_real: empty system");
  const int n = polys.front().num_vars();
  for (const ComplexPolynomial& p : polys)
    if (p.num_vars() != n)
      throw std::invalid_argument("all system polynomials must share the variable count");

  const int rm = 2 * n;  // real variables, interleaved (x_1, y_1, x_2, y_2, ...)
  using Expansion = std::map<std::vector<int>, std::complex<double>>;

  std::vector<Polynomial> out;
  for (const ComplexPolynomial& p : polys) {
    Expansion acc;
    for (const ComplexMonomial& t : p.monomials()) {
      Expansion term{{std::vector<int>(static_cast<std::size_t>(rm), 0), t.coeff}};
      for (int v = 0; v < n; ++v) {
        for (int rep = 0; rep < t.exponents[static_cast<std::size_t>(v)]; ++rep) {
          // multiply by (x_v + i*y_v)
          Expansion next;
          for (const auto& [exps, c] : term) {
            std::vector<int> ex = exps;
            ex[static_cast<std::size_t>(2 * v)] += 1;
            next[ex] += c;
            ex[static_cast<std::size_t>(2 * v)] -= 1;
            ex[static_cast<std::size_t>(2 * v + 1)] += 1;
            next[ex] += c * std::complex<double>(0.0, 1.0);
          }
          term = std::move(next);
        }
      }
      for (const auto& [exps, c] : term) acc[exps] += c;
    }
    std::vector<Monomial> re, im;
    for (const auto& [exps, c] : acc) {
      if (c.real() != 0.0) re.push_back(Monomial{c.real(), exps});
      if (c.imag() != 0.0) im.push_back(Monomial{c.imag(), exps});
    }
    out.emplace_back(rm, std::move(re));
    out.emplace_back(rm, std::move(im));
  }
  return PolySystem(std::move(out));
}

SolveOutcome solve_system(const PolySystem& sys, const std::vector<Vector>& starts,
                          const StepperConfig& config, const SolveOptions& options) {
  const CostFunction f = system_cost(sys);
  SolveOutcome out;

  std::vector<Vector> root_points;
  std::vector<Vector> critical_points;
  for (const Vector& x0 : starts) {
    if (static_cast<int>(x0.size()) != sys.num_vars())
      throw std::invalid_argument("start dimension does not match the system");
    const RunResult r = run(f, x0, config);
    switch (r.termination) {
      case Termination::Diverged:
        ++out.diverged;
        continue;
      case Termination::NumericFailure:
        ++out.numeric_failures;
        continue;
      case Termination::MaxIterations:
        if (r.final_f > options.root_residual_tolerance) {
          ++out.unconverged;
          continue;
        }
        break;
      case Termination::GradToleranceMet:
        break;
    }
    if (r.final_f <= options.root_residual_tolerance)
      root_points.push_back(r.final_x);
    else
      critical_points.push_back(r.final_x);
  }

  // Deterministic merge: sort terminal points lexicographically, then fold
  // points within dedupe_distance of an already-kept representative.
  auto lex_sort = [](std::vector<Vector>& pts) {
    std::stable_sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
  };
  auto dedupe = [&](std::vector<Vector>& pts) {
    std::vector<Vector> kept;
    for (const Vector& p : pts) {
      bool fresh = true;
      for (const Vector& k : kept)
        if (distance(p, k) <= options.dedupe_distance) {
          fresh = false;
          break;
        }
      if (fresh) kept.push_back(p);
    }
    pts = std::move(kept);
  };

  lex_sort(root_points);
  dedupe(root_points);
  for (const Vector& p : root_points) out.roots.emplace_back(p, f.eval(p));

  lex_sort(critical_points);
  dedupe(critical_points);
  for (const Vector& p : critical_points)
    out.non_root_critical.push_back(SolveOutcome::CriticalPoint{p, f.eval(p), norm(f.grad(p))});

  return out;
}

}  // namespace qn
