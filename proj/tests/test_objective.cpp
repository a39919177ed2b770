#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qnewton/objective.hpp"

using namespace qn;

namespace {

Vector random_point(int dim, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  Vector x(static_cast<std::size_t>(dim));
  for (auto& xi : x) xi = lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
  return x;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

void check_derivatives(const CostFunction& f, std::mt19937_64& rng, int points = 100) {
  for (int k = 0; k < points; ++k) {
    const Vector x = random_point(f.dim, rng);
    const Vector g = f.grad(x);
    const Vector gfd = fd_gradient(f, x);
    for (int i = 0; i < f.dim; ++i) CHECK(rel_err(g[i], gfd[i]) <= 1e-5);
    const SymmetricMatrix h = f.hess(x);
    const SymmetricMatrix hfd = fd_hessian(f, x);
    for (int i = 0; i < f.dim; ++i)
      for (int j = 0; j < f.dim; ++j) CHECK(rel_err(h(i, j), hfd(i, j)) <= 1e-3);
  }
}

}  // namespace

TEST_CASE("default finite-difference step scales with the point") {
  CHECK(default_fd_step({0.0, 0.0}) == doctest::Approx(1e-5));
  CHECK(default_fd_step({100.0, -3.0}) == doctest::Approx(1e-3));
}

TEST_CASE("rosenbrock analytic derivatives at pinned points") {
  const CostFunction f = rosenbrock();
  CHECK(f.eval({1.0, 1.0}) == 0.0);
  CHECK(f.eval({-1.2, 1.0}) == doctest::Approx(24.2));

  const Vector g = f.grad({1.0, 1.0});
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  const Vector g0 = f.grad({0.0, 0.0});
  CHECK(g0[0] == doctest::Approx(-2.0));
  CHECK(g0[1] == doctest::Approx(0.0));

  const SymmetricMatrix h = f.hess({1.0, 1.0});
  CHECK(h(0, 0) == doctest::Approx(802.0));
  CHECK(h(0, 1) == doctest::Approx(-400.0));
  CHECK(h(1, 1) == doctest::Approx(200.0));
}

TEST_CASE("corpus analytic derivatives match finite differences") {
  std::mt19937_64 rng(314);
  check_derivatives(rosenbrock(), rng);
  check_derivatives(double_well_saddle(), rng);
  check_derivatives(quartic_degenerate(3), rng);
  check_derivatives(quadratic(SymmetricMatrix({{2.0, 0.5}, {0.5, 1.0}}), {1.0, -1.0}), rng);
}

TEST_CASE("quadratic objective shape") {
  const SymmetricMatrix q({{2.0, 0.0}, {0.0, 4.0}});
  const CostFunction f = quadratic(q, {2.0, 4.0});
  // minimum at Q^{-1} b = (1, 1)
  const Vector g = f.grad({1.0, 1.0});
  CHECK(norm(g) == doctest::Approx(0.0));
  CHECK(f.eval({1.0, 1.0}) == doctest::Approx(0.5 * (2.0 + 4.0) - (2.0 + 4.0)));
  const SymmetricMatrix h = f.hess({5.0, -7.0});
  CHECK(h(0, 0) == 2.0);
  CHECK(h(1, 1) == 4.0);
}

TEST_CASE("double well saddle landscape") {
  const CostFunction f = double_well_saddle();
  CHECK(f.eval({0.0, 1.0}) == doctest::Approx(-0.25));
  CHECK(f.eval({0.0, -1.0}) == doctest::Approx(-0.25));
  CHECK(norm(f.grad({0.0, 0.0})) == 0.0);
  CHECK(norm(f.grad({0.0, 1.0})) == doctest::Approx(0.0));
  const SymmetricMatrix h0 = f.hess({0.0, 0.0});
  CHECK(h0(0, 0) == doctest::Approx(1.0));
  CHECK(h0(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("quartic norm-fourth objective") {
  const CostFunction f = quartic_degenerate(2);
  CHECK(f.eval({1.0, 0.0}) == doctest::Approx(1.0));
  const Vector g = f.grad({1.0, 1.0});  // 4||x||^2 x = (8, 8)
  CHECK(g[0] == doctest::Approx(8.0));
  CHECK(g[1] == doctest::Approx(8.0));
  const SymmetricMatrix h = f.hess({0.0, 0.0});
  CHECK(h.frobenius_norm() == 0.0);
}

TEST_CASE("classification of corpus critical points") {
  const auto rb = classify_critical_point(rosenbrock(), {1.0, 1.0});
  CHECK(rb.classification == Classification::LocalMin);
  CHECK(rb.grad_norm == 0.0);
  REQUIRE(rb.hessian_eigenvalues.size() == 2);
  CHECK(rb.hessian_eigenvalues[0] < rb.hessian_eigenvalues[1]);

  const auto dw = classify_critical_point(double_well_saddle(), {0.0, 0.0});
  CHECK(dw.classification == Classification::Saddle);
  const auto dwm = classify_critical_point(double_well_saddle(), {0.0, -1.0});
  CHECK(dwm.classification == Classification::LocalMin);

  const auto q = classify_critical_point(quartic_degenerate(2), {0.0, 0.0});
  CHECK(q.classification == Classification::Degenerate);

  const CostFunction neg = from_eval(2, [](const Vector& x) { return -dot(x, x); }, "neg");
  CHECK(classify_critical_point(neg, {0.0, 0.0}).classification == Classification::LocalMax);
}

TEST_CASE("classification strings") {
  CHECK(std::string(to_string(Classification::LocalMin)) == "local-min");
  CHECK(std::string(to_string(Classification::Saddle)) == "saddle");
  CHECK(std::string(to_string(Classification::LocalMax)) == "local-max");
  CHECK(std::string(to_string(Classification::Degenerate)) == "degenerate");
}

TEST_CASE("from_eval supplies finite-difference derivatives") {
  const CostFunction f =
      from_eval(2, [](const Vector& x) { return x[0] * x[0] + 3.0 * x[1]; }, "affine-quad");
  CHECK(f.dim == 2);
  CHECK(f.label == "affine-quad");
  const Vector g = f.grad({2.0, 5.0});
  CHECK(g[0] == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-6));
  const SymmetricMatrix h = f.hess({2.0, 5.0});
  CHECK(h(0, 0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(h(1, 1) == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("finite differences accept an explicit step") {
  const CostFunction f = rosenbrock();
  const Vector g1 = fd_gradient(f, {0.3, 0.4}, 1e-6);
  const Vector g2 = f.grad({0.3, 0.4});
  CHECK(rel_err(g1[0], g2[0]) <= 1e-6);
  CHECK(rel_err(g1[1], g2[1]) <= 1e-6);
}
