#pragma once

#include <initializer_list>
#include <vector>

#include "qnewton/vec.hpp"

// Dense symmetric linear algebra for small dimensions: a guaranteed-symmetric
// matrix value type, a cyclic Jacobi eigensolver, spectral projections, and
// orthonormal-basis construction. Self-contained on purpose: the optimizer
// needs exact control over eigenvalue ordering, sign conventions and failure
// behavior.

namespace qn {

class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim);

  // Row-major entries; stores (M + M^T)/2 so the symmetry invariant holds
  // even for sloppy input.
  SymmetricMatrix(int dim, std::vector<double> entries);
  SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymmetricMatrix identity(int dim);
  static SymmetricMatrix diagonal(const Vector& diag);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  const std::vector<double>& data() const { return a_; }

  double frobenius_norm() const;
  SymmetricMatrix shifted(double s) const;  // A + s*Id
  Vector apply(const Vector& v) const;      // A v

 private:
  int dim_;
  std::vector<double> a_;
};

// Eigenvalues ascending; eigenvectors[i] is the unit eigenvector paired with
// eigenvalues[i], sign-fixed so its first component above 1e-12 is positive.
struct EigenDecomposition {
  Vector eigenvalues;
  std::vector<Vector> eigenvectors;
};

class OrthonormalBasis {
 public:
  // Validates pairwise |<e_i,e_j> - delta_ij| <= 1e-10; throws
  // std::domain_error otherwise.
  explicit OrthonormalBasis(std::vector<Vector> vectors);

  static OrthonormalBasis standard(int dim);

  int dim() const { return static_cast<int>(vectors_.size()); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  const Vector& operator[](int i) const { return vectors_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<Vector> vectors_;
};

// Cyclic Jacobi sweeps, capped at 100; converged when the off-diagonal
// Frobenius norm falls to 1e-12*||A||_F. Throws NumericError (with the
// residual) past the cap. Deterministic for identical input.
EigenDecomposition eigen_decompose(const SymmetricMatrix& a);

double minsp(const SymmetricMatrix& a);  // min |eigenvalue|
double sp(const SymmetricMatrix& a);     // max |eigenvalue|

// Invertibility in the sense used throughout: minsp(A) > 1e-12*max(1,||A||_F).
bool is_invertible(const SymmetricMatrix& a);

struct SplitVectors {
  Vector plus;   // projection onto the span of positive-eigenvalue directions
  Vector minus;  // projection onto the span of negative-eigenvalue directions
};

// Requires A invertible (see is_invertible); throws std::domain_error when
// singular. plus + minus reconstructs v up to 1e-10*||v||.
SplitVectors spectral_split(const SymmetricMatrix& a, const Vector& v);

// Extends a unit vector u (||u||-1 within 1e-10, else std::domain_error) to a
// full orthonormal basis with u first: Gram-Schmidt against the standard
// basis, skipping the axis most parallel to u.
OrthonormalBasis complete_to_orthonormal_basis(const Vector& u);

}  // namespace qn
