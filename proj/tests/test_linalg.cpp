#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qnewton/errors.hpp"
#include "qnewton/linalg.hpp"
#include "qnewton/vec.hpp"

using namespace qn;

namespace {

SymmetricMatrix random_symmetric(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::vector<double> entries(static_cast<std::size_t>(dim) * dim);
  auto u = [&] { return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0; };
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double v = scale * u();
      entries[static_cast<std::size_t>(i) * dim + j] = v;
      entries[static_cast<std::size_t>(j) * dim + i] = v;
    }
  return SymmetricMatrix(dim, std::move(entries));
}

Vector random_unit(int dim, std::mt19937_64& rng) {
  Vector v(static_cast<std::size_t>(dim));
  double n = 0.0;
  while (n == 0.0) {
    for (auto& vi : v) vi = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    n = norm(v);
  }
  return scaled(v, 1.0 / n);
}

}  // namespace

TEST_CASE("symmetric matrix construction symmetrizes and applies") {
  SymmetricMatrix m(2, {1.0, 2.0, 4.0, 3.0});  // (M + M^T)/2 -> off-diagonal 3
  CHECK(m(0, 1) == 3.0);
  CHECK(m(1, 0) == 3.0);
  const Vector y = m.apply({1.0, -1.0});
  CHECK(y[0] == doctest::Approx(1.0 - 3.0));
  CHECK(y[1] == doctest::Approx(3.0 - 3.0));
  CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(1.0 + 9.0 + 9.0 + 9.0)));
}

TEST_CASE("identity, diagonal, shifted") {
  const auto id = SymmetricMatrix::identity(3);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);
  const auto d = SymmetricMatrix::diagonal({3.0, -2.0, 0.5});
  CHECK(d(1, 1) == -2.0);
  const auto s = d.shifted(2.0);
  CHECK(s(0, 0) == 5.0);
  CHECK(s(1, 1) == 0.0);
  CHECK(s(2, 2) == 2.5);
  CHECK(s(0, 1) == 0.0);
}

TEST_CASE("eigen decomposition of a diagonal matrix sorts ascending") {
  const auto d = SymmetricMatrix::diagonal({3.0, -2.0, 0.5});
  const auto ed = eigen_decompose(d);
  REQUIRE(ed.eigenvalues.size() == 3);
  CHECK(ed.eigenvalues[0] == doctest::Approx(-2.0));
  CHECK(ed.eigenvalues[1] == doctest::Approx(0.5));
  CHECK(ed.eigenvalues[2] == doctest::Approx(3.0));
  CHECK(minsp(d) == doctest::Approx(0.5));
  CHECK(sp(d) == doctest::Approx(3.0));
}

TEST_CASE("eigen decomposition of [[2,1],[1,2]]") {
  const SymmetricMatrix m(2, {2.0, 1.0, 1.0, 2.0});
  const auto ed = eigen_decompose(m);
  CHECK(ed.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(ed.eigenvalues[1] == doctest::Approx(3.0));
  // lambda=1 direction is (1,-1)/sqrt(2); sign convention makes the first
  // nonzero-beyond-tolerance component positive.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(ed.eigenvectors[0][0] == doctest::Approx(inv_sqrt2));
  CHECK(ed.eigenvectors[0][1] == doctest::Approx(-inv_sqrt2));
  CHECK(ed.eigenvectors[1][0] == doctest::Approx(inv_sqrt2));
  CHECK(ed.eigenvectors[1][1] == doctest::Approx(inv_sqrt2));
}

TEST_CASE("random symmetric matrices: eigenpairs satisfy A v = lambda v") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 6);
    const auto a = random_symmetric(dim, rng, 5.0);
    const auto ed = eigen_decompose(a);
    REQUIRE(static_cast<int>(ed.eigenvalues.size()) == dim);
    for (int i = 0; i < dim; ++i) {
      const Vector av = a.apply(ed.eigenvectors[i]);
      const Vector lv = scaled(ed.eigenvectors[i], ed.eigenvalues[i]);
      CHECK(distance(av, lv) <= 1e-9 * std::max(1.0, a.frobenius_norm()));
      if (i > 0) CHECK(ed.eigenvalues[i] >= ed.eigenvalues[i - 1]);
    }
    // eigenvector matrix is orthonormal
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j <= i; ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(dot(ed.eigenvectors[i], ed.eigenvectors[j]) == doctest::Approx(expected).epsilon(1e-9));
      }
  }
}

TEST_CASE("eigenvalue sum and square-sum match trace and frobenius") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 5);
    const auto a = random_symmetric(dim, rng, 3.0);
    const auto ed = eigen_decompose(a);
    double trace = 0.0, sum = 0.0, sq = 0.0;
    for (int i = 0; i < dim; ++i) trace += a(i, i);
    for (double lam : ed.eigenvalues) {
      sum += lam;
      sq += lam * lam;
    }
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
    CHECK(std::sqrt(sq) == doctest::Approx(a.frobenius_norm()).epsilon(1e-10));
  }
}

TEST_CASE("minsp is a lower bound on ||A e|| over unit vectors") {
  std::mt19937_64 rng(99);
  const auto a = random_symmetric(4, rng, 2.0);
  const double ms = minsp(a);
  double sampled_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    const double n = norm(a.apply(random_unit(4, rng)));
    CHECK(n >= ms - 1e-8);
    sampled_min = std::min(sampled_min, n);
  }
  CHECK(sampled_min >= ms - 1e-8);
}

TEST_CASE("non-finite input raises a numeric error") {
  CHECK_THROWS_AS(eigen_decompose(SymmetricMatrix(2, {1.0, 0.0, 0.0,
                                                      std::numeric_limits<double>::quiet_NaN()})),
                  NumericError);
}

TEST_CASE("invertibility threshold") {
  CHECK(is_invertible(SymmetricMatrix::diagonal({1.0, -2.0})));
  CHECK_FALSE(is_invertible(SymmetricMatrix::diagonal({1.0, 0.0})));
}

TEST_CASE("spectral split separates eigen-sign components") {
  const auto a = SymmetricMatrix::diagonal({2.0, -1.0});
  const Vector v{1.0, 1.0};
  const auto [plus, minus] = spectral_split(a, v);
  CHECK(plus[0] == doctest::Approx(1.0));
  CHECK(plus[1] == doctest::Approx(0.0));
  CHECK(minus[0] == doctest::Approx(0.0));
  CHECK(minus[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(spectral_split(SymmetricMatrix::diagonal({1.0, 0.0}), v), std::domain_error);
}

TEST_CASE("spectral split components sum to the input and are A-invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 4);
    auto a = random_symmetric(dim, rng, 2.0);
    if (!is_invertible(a)) continue;
    const Vector v = random_unit(dim, rng);
    const auto [plus, minus] = spectral_split(a, v);
    CHECK(distance(add_scaled(plus, 1.0, minus), v) <= 1e-10);
    // each part stays in its spectral subspace: <plus, minus> = 0
    CHECK(std::abs(dot(plus, minus)) <= 1e-10);
  }
}

TEST_CASE("orthonormal basis validates its vectors") {
  CHECK_NOTHROW(OrthonormalBasis({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK_THROWS_AS(OrthonormalBasis({{1.0, 0.0}, {1.0, 0.0}}), std::domain_error);
  CHECK_THROWS_AS(OrthonormalBasis({{2.0, 0.0}, {0.0, 1.0}}), std::domain_error);
  const auto std3 = OrthonormalBasis::standard(3);
  CHECK(std3.dim() == 3);
  CHECK(std3[2][2] == 1.0);
}

TEST_CASE("complete_to_orthonormal_basis keeps the seed vector first") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 6);
    const Vector u = random_unit(dim, rng);
    const auto basis = complete_to_orthonormal_basis(u);
    REQUIRE(basis.dim() == dim);
    CHECK(distance(basis[0], u) <= 1e-12);
    for (int i = 0; i < basis.dim(); ++i)
      for (int j = 0; j <= i; ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(dot(basis[i], basis[j]) - expected) <= 1e-10);
      }
  }
  CHECK_THROWS_AS(complete_to_orthonormal_basis(Vector{2.0, 0.0}), std::domain_error);
}

TEST_CASE("vector helpers") {
  const Vector a{3.0, 4.0};
  CHECK(norm(a) == doctest::Approx(5.0));
  CHECK(norm_inf(a) == 4.0);
  CHECK(dot(a, a) == doctest::Approx(25.0));
  CHECK(distance(a, Vector{0.0, 0.0}) == doctest::Approx(5.0));
  const Vector b = add_scaled(a, -2.0, Vector{1.0, 1.0});
  CHECK(b[0] == 1.0);
  CHECK(b[1] == 2.0);
  CHECK(all_finite(a));
  CHECK_FALSE(all_finite(Vector{1.0, std::numeric_limits<double>::infinity()}));
}
