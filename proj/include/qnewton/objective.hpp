#pragma once

#include <functional>
#include <string>

#include "qnewton/linalg.hpp"
#include "qnewton/vec.hpp"

// Objective-function abstraction: a cost function bundles value/gradient/
// Hessian callables, with central-difference fallbacks for black-box
// objectives and a classifier for terminal points. Ships a small corpus of
// standard test problems.

namespace qn {

struct CostFunction {
  int dim = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad;
  std::function<SymmetricMatrix(const Vector&)> hess;
  std::string label;
};

enum class Classification { LocalMin, Saddle, LocalMax, Degenerate };

const char* to_string(Classification c);

struct CriticalPointReport {
  Vector location;
  double grad_norm = 0.0;
  Vector hessian_eigenvalues;  // ascending; empty if the Hessian was unusable
  Classification classification = Classification::Degenerate;
};

// Default step for finite differences: 1e-5 * max(1, ||x||_inf).
double default_fd_step(const Vector& x);

// Central differences of f.eval. Pass h <= 0 to use default_fd_step.
Vector fd_gradient(const CostFunction& f, const Vector& x, double h = 0.0);

// Symmetrized second-order central differences of f.eval.
SymmetricMatrix fd_hessian(const CostFunction& f, const Vector& x, double h = 0.0);

// Eigenvalue signs against tol = 1e-8*max(1,||hess||_F): any |lambda| <= tol
// is degenerate; otherwise all positive = local-min, all negative =
// local-max, mixed = saddle.
CriticalPointReport classify_critical_point(const CostFunction& f, const Vector& x);

// Wraps a value-only callable with finite-difference gradient and Hessian.
CostFunction from_eval(int dim, std::function<double(const Vector&)> eval, std::string label);

// f(x) = x'Qx/2 - b'x; gradient Qx - b, constant Hessian Q.
CostFunction quadratic(const SymmetricMatrix& q, const Vector& b);

// Classic 2-D Rosenbrock, global minimum at (1,1).
CostFunction rosenbrock();

// f(x,y) = x^2/2 - y^2/2 + y^4/4: saddle at the origin, minima at (0,+-1).
CostFunction double_well_saddle();

// f(x) = ||x||^4: degenerate (singular-Hessian) minimum at the origin.
CostFunction quartic_degenerate(int dim = 2);

}  // namespace qn
