#include "qnewton/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qnewton/errors.hpp"

namespace qn {

namespace {

int checked_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  return dim;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(int dim)
    : dim_(checked_dim(dim)), a_(static_cast<std::size_t>(dim) * dim, 0.0) {}

SymmetricMatrix::SymmetricMatrix(int dim, std::vector<double> entries) : dim_(checked_dim(dim)) {
  if (entries.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("entry count does not match dimension");
  a_.resize(entries.size());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * dim + j;
      const std::size_t ji = static_cast<std::size_t>(j) * dim + i;
      a_[ij] = 0.5 * (entries[ij] + entries[ji]);
    }
}

SymmetricMatrix::SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(checked_dim(static_cast<int>(rows.size()))) {
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(dim_) * dim_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim_)
      throw std::invalid_argument("matrix initializer is not square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  *this = SymmetricMatrix(dim_, std::move(entries));
}

SymmetricMatrix SymmetricMatrix::identity(int dim) {
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.a_[static_cast<std::size_t>(i) * dim + i] = 1.0;
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& diag) {
  SymmetricMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.dim_; ++i) m.a_[static_cast<std::size_t>(i) * m.dim_ + i] = diag[i];
  return m;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

SymmetricMatrix SymmetricMatrix::shifted(double s) const {
  SymmetricMatrix m = *this;
  for (int i = 0; i < dim_; ++i) m.a_[static_cast<std::size_t>(i) * dim_ + i] += s;
  return m;
}

Vector SymmetricMatrix::apply(const Vector& v) const {
  if (static_cast<int>(v.size()) != dim_)
    throw std::invalid_argument("vector dimension does not match matrix");
  Vector out(v.size(), 0.0);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += a_[static_cast<std::size_t>(i) * dim_ + j] * v[j];
    out[i] = s;
  }
  return out;
}

OrthonormalBasis::OrthonormalBasis(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  const std::size_t m = vectors_.size();
  if (m == 0) throw std::invalid_argument("basis must contain at least one vector");
  for (const auto& v : vectors_)
    if (v.size() != m) throw std::invalid_argument("basis vectors must have dimension equal to their count");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot(vectors_[i], vectors_[j]) - want) > 1e-10)
        throw std::domain_error("vectors do not form an orthonormal basis");
    }
}

OrthonormalBasis OrthonormalBasis::standard(int dim) {
  std::vector<Vector> vecs(static_cast<std::size_t>(checked_dim(dim)), Vector(dim, 0.0));
  for (int i = 0; i < dim; ++i) vecs[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  return OrthonormalBasis(std::move(vecs));
}

namespace {

double offdiag_norm(const std::vector<double>& b, int m) {
  double s = 0.0;
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < m; ++q) {
      const double x = b[static_cast<std::size_t>(p) * m + q];
      s += x * x;
    }
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition eigen_decompose(const SymmetricMatrix& a) {
  const int m = a.dim();
  for (double x : a.data())
    if (!std::isfinite(x)) throw NumericError("eigen_decompose: matrix has non-finite entries");

  std::vector<double> b = a.data();
  std::vector<double> v(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i) * m + i] = 1.0;

  const double tol = 1e-12 * a.frobenius_norm();
  double off = offdiag_norm(b, m);
  int sweep = 0;
  while (off > tol && sweep < 100) {
    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = b[static_cast<std::size_t>(p) * m + q];
        if (apq == 0.0) continue;
        const double theta =
            (b[static_cast<std::size_t>(q) * m + q] - b[static_cast<std::size_t>(p) * m + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        for (int r = 0; r < m; ++r) {
          if (r == p || r == q) continue;
          const double arp = b[static_cast<std::size_t>(r) * m + p];
          const double arq = b[static_cast<std::size_t>(r) * m + q];
          const double nrp = arp - s * (arq + tau * arp);
          const double nrq = arq + s * (arp - tau * arq);
          b[static_cast<std::size_t>(r) * m + p] = b[static_cast<std::size_t>(p) * m + r] = nrp;
          b[static_cast<std::size_t>(r) * m + q] = b[static_cast<std::size_t>(q) * m + r] = nrq;
        }
        b[static_cast<std::size_t>(p) * m + p] -= t * apq;
        b[static_cast<std::size_t>(q) * m + q] += t * apq;
        b[static_cast<std::size_t>(p) * m + q] = b[static_cast<std::size_t>(q) * m + p] = 0.0;

        for (int r = 0; r < m; ++r) {
          const double vrp = v[static_cast<std::size_t>(r) * m + p];
          const double vrq = v[static_cast<std::size_t>(r) * m + q];
          v[static_cast<std::size_t>(r) * m + p] = vrp - s * (vrq + tau * vrp);
          v[static_cast<std::size_t>(r) * m + q] = vrq + s * (vrp - tau * vrq);
        }
      }
    }
    ++sweep;
    off = offdiag_norm(b, m);
  }
  if (off > tol)
    throw NumericError("eigen_decompose: Jacobi sweeps did not converge within 100 sweeps", off);

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return b[static_cast<std::size_t>(i) * m + i] < b[static_cast<std::size_t>(j) * m + j];
  });

  EigenDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(m));
  out.eigenvectors.assign(static_cast<std::size_t>(m), Vector(static_cast<std::size_t>(m)));
  for (int k = 0; k < m; ++k) {
    const int col = order[static_cast<std::size_t>(k)];
    out.eigenvalues[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(col) * m + col];
    Vector& vec = out.eigenvectors[static_cast<std::size_t>(k)];
    for (int r = 0; r < m; ++r) vec[static_cast<std::size_t>(r)] = v[static_cast<std::size_t>(r) * m + col];
    // Sign convention: first component exceeding 1e-12 in magnitude is positive.
    for (double x : vec) {
      if (std::abs(x) > 1e-12) {
        if (x < 0.0)
          for (double& y : vec) y = -y;
        break;
      }
    }
  }
  return out;
}

double minsp(const SymmetricMatrix& a) {
  const EigenDecomposition eig = eigen_decompose(a);
  double lo = std::abs(eig.eigenvalues[0]);
  for (double x : eig.eigenvalues) lo = std::min(lo, std::abs(x));
  return lo;
}

double sp(const SymmetricMatrix& a) {
  const EigenDecomposition eig = eigen_decompose(a);
  double hi = 0.0;
  for (double x : eig.eigenvalues) hi = std::max(hi, std::abs(x));
  return hi;
}

bool is_invertible(const SymmetricMatrix& a) {
  return minsp(a) > 1e-12 * std::max(1.0, a.frobenius_norm());
}

SplitVectors spectral_split(const SymmetricMatrix& a, const Vector& v) {
  if (static_cast<int>(v.size()) != a.dim())
    throw std::invalid_argument("vector dimension does not match matrix");
  const EigenDecomposition eig = eigen_decompose(a);
  double lo = std::abs(eig.eigenvalues[0]);
  for (double x : eig.eigenvalues) lo = std::min(lo, std::abs(x));
  if (!(lo > 1e-12 * std::max(1.0, a.frobenius_norm())))
    throw std::domain_error("spectral_split requires an invertible matrix");

  SplitVectors out{Vector(v.size(), 0.0), Vector(v.size(), 0.0)};
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    const Vector& q = eig.eigenvectors[k];
    const double c = dot(v, q);
    Vector& target = (eig.eigenvalues[k] > 0.0) ? out.plus : out.minus;
    for (std::size_t i = 0; i < v.size(); ++i) target[i] += c * q[i];
  }
  return out;
}

OrthonormalBasis complete_to_orthonormal_basis(const Vector& u) {
  const int m = static_cast<int>(u.size());
  if (m < 1) throw std::invalid_argument("empty vector");
  if (std::abs(norm(u) - 1.0) > 1e-10)
    throw std::domain_error("complete_to_orthonormal_basis requires a unit vector");

  int skip = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(u[static_cast<std::size_t>(i)]) > std::abs(u[static_cast<std::size_t>(skip)])) skip = i;

  std::vector<Vector> vecs;
  vecs.reserve(static_cast<std::size_t>(m));
  vecs.push_back(u);
  for (int j = 0; j < m; ++j) {
    if (j == skip) continue;
    Vector w(static_cast<std::size_t>(m), 0.0);
    w[static_cast<std::size_t>(j)] = 1.0;
    // Two Gram-Schmidt passes keep orthogonality near machine precision.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& e : vecs) {
        const double c = dot(w, e);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * e[i];
      }
    const double wn = norm(w);
    if (!(wn > 0.0)) throw NumericError("complete_to_orthonormal_basis: degenerate direction", wn);
    for (double& x : w) x /= wn;
    vecs.push_back(std::move(w));
  }
  return OrthonormalBasis(std::move(vecs));
}

}  // namespace qn
