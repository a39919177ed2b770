#include "qnewton/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qnewton/errors.hpp"

namespace qn {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::LocalMin: return "local-min";
    case Classification::Saddle: return "saddle";
    case Classification::LocalMax: return "local-max";
    case Classification::Degenerate: return "degenerate";
  }
  return "?";
}

double default_fd_step(const Vector& x) { return 1e-5 * std::max(1.0, norm_inf(x)); }

Vector fd_gradient(const CostFunction& f, const Vector& x, double h) {
  if (h <= 0.0) h = default_fd_step(x);
  Vector g(x.size(), 0.0);
  Vector xp = x, xm = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

SymmetricMatrix fd_hessian(const CostFunction& f, const Vector& x, double h) {
  if (h <= 0.0) h = default_fd_step(x);
  const int m = static_cast<int>(x.size());
  std::vector<double> entries(static_cast<std::size_t>(m) * m, 0.0);
  const double f0 = f.eval(x);
  Vector y = x;
  for (int i = 0; i < m; ++i) {
    y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h;
    const double fp = f.eval(y);
    y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - h;
    const double fm = f.eval(y);
    y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    entries[static_cast<std::size_t>(i) * m + i] = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      y[si] = x[si] + h;
      y[sj] = x[sj] + h;
      const double fpp = f.eval(y);
      y[sj] = x[sj] - h;
      const double fpm = f.eval(y);
      y[si] = x[si] - h;
      const double fmm = f.eval(y);
      y[sj] = x[sj] + h;
      const double fmp = f.eval(y);
      y[si] = x[si];
      y[sj] = x[sj];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      entries[static_cast<std::size_t>(i) * m + j] = v;
      entries[static_cast<std::size_t>(j) * m + i] = v;
    }
  return SymmetricMatrix(m, std::move(entries));
}

CriticalPointReport classify_critical_point(const CostFunction& f, const Vector& x) {
  CriticalPointReport report;
  report.location = x;
  report.grad_norm = norm(f.grad(x));

  SymmetricMatrix hess = f.hess(x);
  try {
    const EigenDecomposition eig = eigen_decompose(hess);
    report.hessian_eigenvalues = eig.eigenvalues;
  } catch (const NumericError&) {
    report.classification = Classification::Degenerate;
    return report;
  }

  const double tol = 1e-8 * std::max(1.0, hess.frobenius_norm());
  bool any_small = false, all_pos = true, all_neg = true;
  for (double lambda : report.hessian_eigenvalues) {
    if (std::abs(lambda) <= tol) any_small = true;
    if (lambda <= tol) all_pos = false;
    if (lambda >= -tol) all_neg = false;
  }
  if (any_small)
    report.classification = Classification::Degenerate;
  else if (all_pos)
    report.classification = Classification::LocalMin;
  else if (all_neg)
    report.classification = Classification::LocalMax;
  else
    report.classification = Classification::Saddle;
  return report;
}

CostFunction from_eval(int dim, std::function<double(const Vector&)> eval, std::string label) {
  CostFunction f;
  f.dim = dim;
  f.eval = std::move(eval);
  f.label = std::move(label);
  // Capture by value so the wrapper owns everything it needs.
  CostFunction probe{dim, f.eval, nullptr, nullptr, f.label};
  f.grad = [probe](const Vector& x) { return fd_gradient(probe, x); };
  f.hess = [probe](const Vector& x) { return fd_hessian(probe, x); };
  return f;
}

CostFunction quadratic(const SymmetricMatrix& q, const Vector& b) {
  if (static_cast<int>(b.size()) != q.dim())
    throw std::invalid_argument("quadratic: b dimension does not match Q");
  CostFunction f;
  f.dim = q.dim();
  f.label = "quadratic";
  f.eval = [q, b](const Vector& x) { return 0.5 * dot(x, q.apply(x)) - dot(b, x); };
  f.grad = [q, b](const Vector& x) { return sub(q.apply(x), b); };
  f.hess = [q](const Vector&) { return q; };
  return f;
}

CostFunction rosenbrock() {
  CostFunction f;
  f.dim = 2;
  f.label = "rosenbrock";
  f.eval = [](const Vector& v) {
    const double x = v[0], y = v[1];
    const double r = y - x * x;
    return (1.0 - x) * (1.0 - x) + 100.0 * r * r;
  };
  f.grad = [](const Vector& v) {
    const double x = v[0], y = v[1];
    const double r = y - x * x;
    return Vector{-400.0 * x * r - 2.0 * (1.0 - x), 200.0 * r};
  };
  f.hess = [](const Vector& v) {
    const double x = v[0], y = v[1];
    return SymmetricMatrix{{1200.0 * x * x - 400.0 * y + 2.0, -400.0 * x}, {-400.0 * x, 200.0}};
  };
  return f;
}

CostFunction double_well_saddle() {
  CostFunction f;
  f.dim = 2;
  f.label = "double_well_saddle";
  f.eval = [](const Vector& v) {
    const double x = v[0], y = v[1];
    return 0.5 * x * x - 0.5 * y * y + 0.25 * y * y * y * y;
  };
  f.grad = [](const Vector& v) {
    const double x = v[0], y = v[1];
    return Vector{x, -y + y * y * y};
  };
  f.hess = [](const Vector& v) {
    const double y = v[1];
    return SymmetricMatrix{{1.0, 0.0}, {0.0, 3.0 * y * y - 1.0}};
  };
  return f;
}

CostFunction quartic_degenerate(int dim) {
  if (dim < 1) throw std::invalid_argument("quartic_degenerate: dim must be >= 1");
  CostFunction f;
  f.dim = dim;
  f.label = "quartic_degenerate";
  f.eval = [](const Vector& x) {
    const double s = dot(x, x);
    return s * s;
  };
  f.grad = [](const Vector& x) {
    const double s = dot(x, x);
    return scaled(x, 4.0 * s);
  };
  f.hess = [dim](const Vector& x) {
    const double s = dot(x, x);
    std::vector<double> entries(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double v = 8.0 * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        if (i == j) v += 4.0 * s;
        entries[static_cast<std::size_t>(i) * dim + j] = v;
      }
    return SymmetricMatrix(dim, std::move(entries));
  };
  return f;
}

}  // namespace qn
