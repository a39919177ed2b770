#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qnewton/objective.hpp"
#include "qnewton/stepper.hpp"
#include "qnewton/vec.hpp"

// Polynomial systems solved through optimization: a system P_1 = ... = P_k = 0
// becomes the cost f = sum_i P_i^2, whose global minima at value zero are
// exactly the common roots. Polynomials are sparse monomial lists with exact
// symbolic differentiation; complex systems reduce to real ones by splitting
// each variable into real and imaginary parts.

namespace qn {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;  // one entry per variable

  bool operator==(const Monomial&) const = default;
};

class Polynomial {
 public:
  // Canonicalizes: merges duplicate exponent vectors, drops zero
  // coefficients, orders terms lexicographically by exponents.
  Polynomial(int num_vars, std::vector<Monomial> terms);

  static Polynomial zero(int num_vars) { return Polynomial(num_vars, {}); }
  static Polynomial constant(int num_vars, double c);

  int num_vars() const { return num_vars_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  int degree() const;  // 0 for the zero polynomial
  bool is_zero() const { return monomials_.empty(); }

  bool operator==(const Polynomial& other) const = default;

 private:
  int num_vars_;
  std::vector<Monomial> monomials_;
};

double poly_eval(const Polynomial& p, const Vector& x);
Polynomial poly_diff(const Polynomial& p, int var);

class PolySystem {
 public:
  explicit PolySystem(std::vector<Polynomial> polys);

  int num_vars() const { return num_vars_; }
  const std::vector<Polynomial>& polynomials() const { return polys_; }

  // Degree of the cost f = sum P_i^2, i.e. twice the largest P_i degree.
  int cost_degree() const;

 private:
  std::vector<Polynomial> polys_;
  int num_vars_;
};

// f = sum_i P_i(x)^2 with analytic gradient 2 sum P_i grad P_i and Hessian
// 2 sum (grad P_i grad P_i^T + P_i hess P_i); all partials are differentiated
// symbolically once, up front.
CostFunction system_cost(const PolySystem& sys);

// R = d * (3d - 3)^(m-1): controls how aggressive the shift exponent may be
// while the convergence guarantee near a root still holds.
double exponent_bound_r(int num_vars, int cost_degree);

// Safe shift exponent 0.99/(R - 1) for m variables and cost degree d >= 2;
// computed in log space so huge R degrades to a tiny positive value instead
// of overflowing.
double tau0_for_degree(int num_vars, int cost_degree);
double tau0(const PolySystem& sys);  // uses sys.cost_degree()

struct ComplexMonomial {
  std::complex<double> coeff;
  std::vector<int> exponents;
};

class ComplexPolynomial {
 public:
  ComplexPolynomial(int num_vars, std::vector<ComplexMonomial> terms);

  int num_vars() const { return num_vars_; }
  const std::vector<ComplexMonomial>& monomials() const { return monomials_; }
  std::complex<double> eval(const std::vector<std::complex<double>>& z) const;

 private:
  int num_vars_;
  std::vector<ComplexMonomial> monomials_;
};

// Substitutes z_j = x_j + i*y_j and emits (real part, imaginary part) for
// each input polynomial, over 2n real variables interleaved as
// (x_1, y_1, x_2, y_2, ...).
PolySystem complex_to_real(const std::vector<ComplexPolynomial>& polys);

struct SolveOptions {
  double root_residual_tolerance = 1e-16;  // f at or below this is a root
  double dedupe_distance = 1e-6;
};

struct SolveOutcome {
  // Deduplicated roots (lexicographically sorted) with their f residuals.
  std::vector<std::pair<Vector, double>> roots;

  struct CriticalPoint {
    Vector x;
    double f = 0.0;
    double grad_norm = 0.0;
  };
  // Gradient-vanishing terminal points that are not roots, deduplicated.
  std::vector<CriticalPoint> non_root_critical;

  int diverged = 0;
  int unconverged = 0;      // hit max_iterations away from any root
  int numeric_failures = 0;
};

// Runs the optimizer from every start and merges the terminal points. Results
// are deterministic for fixed starts/config regardless of evaluation order.
SolveOutcome solve_system(const PolySystem& sys, const std::vector<Vector>& starts,
                          const StepperConfig& config, const SolveOptions& options = {});

}  // namespace qn
