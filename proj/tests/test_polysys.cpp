#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "qnewton/objective.hpp"
#include "qnewton/poly_text.hpp"
#include "qnewton/polysys.hpp"
#include "qnewton/stepper.hpp"

using namespace qn;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

Vector random_point(int dim, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  Vector x(static_cast<std::size_t>(dim));
  for (auto& xi : x) xi = uniform(rng, lo, hi);
  return x;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// x1^2 + x2^2 - 1 = 0 intersected with x1 - x2 = 0
PolySystem circle_and_line() {
  const Polynomial circle(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-1.0, {0, 0}}});
  const Polynomial line(2, {{1.0, {1, 0}}, {-1.0, {0, 1}}});
  return PolySystem({circle, line});
}

void check_cost_derivatives(const PolySystem& sys, std::mt19937_64& rng) {
  const CostFunction f = system_cost(sys);
  for (int k = 0; k < 100; ++k) {
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

TEST_CASE("polynomials canonicalize on construction") {
  const Polynomial p(2, {{1.0, {2, 0}}, {2.0, {2, 0}}, {5.0, {0, 1}}, {-5.0, {0, 1}}});
  REQUIRE(p.monomials().size() == 1);  // x^2 terms merge, y terms cancel
  CHECK(p.monomials()[0].coeff == 3.0);
  CHECK(p.degree() == 2);
  CHECK(Polynomial::zero(3).degree() == 0);
  CHECK(Polynomial::zero(3).is_zero());
  CHECK(Polynomial::constant(2, 4.0).degree() == 0);
}

TEST_CASE("polynomial evaluation") {
  const Polynomial p(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-1.0, {0, 0}}});
  CHECK(poly_eval(p, {1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(poly_eval(Polynomial::zero(2), {3.0, -7.0}) == 0.0);
  const Polynomial q(2, {{3.0, {2, 1}}});
  CHECK(poly_eval(q, {2.0, 5.0}) == doctest::Approx(60.0));
}

TEST_CASE("symbolic differentiation") {
  const Polynomial p(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-1.0, {0, 0}}});
  const Polynomial dx = poly_diff(p, 0);
  CHECK(dx == Polynomial(2, {{2.0, {1, 0}}}));
  CHECK(poly_diff(Polynomial(2, {{3.0, {2, 0}}}), 1).is_zero());
  CHECK(poly_diff(Polynomial(2, {{3.0, {2, 1}}}), 0) == Polynomial(2, {{6.0, {1, 1}}}));
}

TEST_CASE("system shape and cost degree") {
  const PolySystem sys = circle_and_line();
  CHECK(sys.num_vars() == 2);
  CHECK(sys.cost_degree() == 4);  // twice the max constituent degree
  CHECK_THROWS_AS(PolySystem({}), std::invalid_argument);
  CHECK_THROWS_AS(PolySystem({Polynomial::zero(1), Polynomial::zero(2)}), std::invalid_argument);
}

TEST_CASE("system cost at known points") {
  const CostFunction f = system_cost(circle_and_line());
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(f.eval({s, s}) <= 1e-30);
  CHECK(norm(f.grad({s, s})) <= 1e-14);

  const CostFunction single = system_cost(PolySystem({Polynomial(1, {{1.0, {1}}})}));
  CHECK(single.eval({3.0}) == doctest::Approx(9.0));
  CHECK(single.grad({3.0})[0] == doctest::Approx(6.0));
  CHECK(single.hess({3.0})(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("system cost derivatives match finite differences") {
  std::mt19937_64 rng(555);
  check_cost_derivatives(circle_and_line(), rng);
  // a denser 3-variable system
  const Polynomial p1(3, {{1.0, {2, 1, 0}}, {-2.0, {0, 0, 1}}, {0.5, {0, 0, 0}}});
  const Polynomial p2(3, {{1.0, {0, 2, 0}}, {1.0, {1, 0, 1}}, {-1.0, {0, 0, 0}}});
  check_cost_derivatives(PolySystem({p1, p2}), rng);
}

TEST_CASE("system cost is non-negative") {
  std::mt19937_64 rng(808);
  const CostFunction f = system_cost(circle_and_line());
  for (int k = 0; k < 1000; ++k) CHECK(f.eval(random_point(2, rng, -10.0, 10.0)) >= 0.0);
}

TEST_CASE("exponent bound and recommended tau") {
  CHECK(exponent_bound_r(2, 2) == doctest::Approx(6.0));
  CHECK(exponent_bound_r(1, 4) == doctest::Approx(4.0));
  CHECK(exponent_bound_r(3, 2) == doctest::Approx(18.0));
  CHECK(exponent_bound_r(2, 4) == doctest::Approx(36.0));

  CHECK(tau0_for_degree(2, 2) == doctest::Approx(0.198));
  CHECK(tau0_for_degree(1, 4) == doctest::Approx(0.33));
  CHECK(tau0_for_degree(3, 2) == doctest::Approx(0.99 / 17.0));

  CHECK(tau0(circle_and_line()) == doctest::Approx(0.99 / 35.0));  // d_f = 4

  CHECK_THROWS_AS(tau0_for_degree(2, 1), std::domain_error);
}

TEST_CASE("tau0 satisfies the exponent inequality and survives huge degrees") {
  for (auto [m, d] : {std::pair{2, 2}, {1, 4}, {3, 2}, {4, 6}, {6, 10}}) {
    const double r = exponent_bound_r(m, d);
    const double tau = tau0_for_degree(m, d);
    CHECK(tau > 0.0);
    CHECK(tau < 1.0);
    CHECK((1.0 - 1.0 / r) * (1.0 + tau) < 1.0);
  }
  // still finite: R(50,20) = 20*57^49 ~ 2e87
  CHECK(exponent_bound_r(50, 20) == doctest::Approx(2.18222e87).epsilon(1e-3));
  CHECK(tau0_for_degree(50, 20) > 0.0);
  CHECK(tau0_for_degree(50, 20) < 1e-50);
  // R overflows double here; the log-space fallback must stay positive
  CHECK(std::isinf(exponent_bound_r(650, 2)));
  const double tiny = tau0_for_degree(650, 2);
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-300);
  // and even when the fallback itself underflows, tau0 stays positive
  CHECK(std::isinf(exponent_bound_r(200, 20)));
  CHECK(tau0_for_degree(200, 20) > 0.0);
}

TEST_CASE("complex polynomials evaluate and split into real pairs") {
  using namespace std::complex_literals;
  const ComplexPolynomial p(1, {{1.0 + 0.0i, {2}}, {-1.0 + 0.0i, {0}}});  // z^2 - 1
  CHECK(std::abs(p.eval({1.0 + 0.0i})) == 0.0);
  CHECK(std::abs(p.eval({1.0i}) - (-2.0 + 0.0i)) <= 1e-15);

  const PolySystem real_sys = complex_to_real({p});
  REQUIRE(real_sys.polynomials().size() == 2);
  CHECK(real_sys.num_vars() == 2);
  // Re: x^2 - y^2 - 1, Im: 2xy
  CHECK(real_sys.polynomials()[0] ==
        Polynomial(2, {{1.0, {2, 0}}, {-1.0, {0, 2}}, {-1.0, {0, 0}}}));
  CHECK(real_sys.polynomials()[1] == Polynomial(2, {{2.0, {1, 1}}}));

  const ComplexPolynomial id(1, {{1.0 + 0.0i, {1}}});  // z
  const PolySystem id_sys = complex_to_real({id});
  CHECK(id_sys.polynomials()[0] == Polynomial(2, {{1.0, {1, 0}}}));
  CHECK(id_sys.polynomials()[1] == Polynomial(2, {{1.0, {0, 1}}}));
}

TEST_CASE("complex-to-real preserves the modulus-squared cost") {
  using namespace std::complex_literals;
  // z1^3 - 1 and (2+i)z1*z2 + z2^2
  const ComplexPolynomial p1(2, {{1.0 + 0.0i, {3, 0}}, {-1.0 + 0.0i, {0, 0}}});
  const ComplexPolynomial p2(2, {{2.0 + 1.0i, {1, 1}}, {1.0 + 0.0i, {0, 2}}});
  const PolySystem real_sys = complex_to_real({p1, p2});
  CHECK(real_sys.num_vars() == 4);
  const CostFunction f = system_cost(real_sys);

  std::mt19937_64 rng(99);
  for (int k = 0; k < 200; ++k) {
    const Vector x = random_point(4, rng);
    const std::vector<std::complex<double>> z{{x[0], x[1]}, {x[2], x[3]}};
    const double expected = std::norm(p1.eval(z)) + std::norm(p2.eval(z));
    CHECK(rel_err(f.eval(x), expected) <= 1e-12);
  }

  // cube root of unity is a root of the realified z^3 - 1
  const CostFunction cube = system_cost(complex_to_real({p1}));
  CHECK(cube.eval({-0.5, std::sqrt(3.0) / 2.0, 0.7, -0.3}) <= 1e-12);
}

TEST_CASE("solve_system finds both circle-line roots") {
  std::mt19937_64 rng(123);
  std::vector<Vector> starts;
  for (int s = 0; s < 20; ++s) starts.push_back(random_point(2, rng));
  StepperConfig cfg = StepperConfig::defaults(Variant::G);
  cfg.tau = tau0(circle_and_line());
  const SolveOutcome out = solve_system(circle_and_line(), starts, cfg);
  REQUIRE(out.roots.size() == 2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(distance(out.roots[0].first, {-s, -s}) <= 1e-6);
  CHECK(distance(out.roots[1].first, {s, s}) <= 1e-6);
  CHECK(out.roots[0].second <= 1e-16);
  CHECK(out.roots[1].second <= 1e-16);
  CHECK(out.non_root_critical.empty());
}

TEST_CASE("solve_system reports non-root critical points") {
  // x^2 + 1 has no real root; f = (x^2+1)^2 has its only critical point at 0
  const PolySystem sys({Polynomial(1, {{1.0, {2}}, {1.0, {0}}})});
  std::mt19937_64 rng(321);
  std::vector<Vector> starts;
  for (int s = 0; s < 10; ++s) starts.push_back(random_point(1, rng));
  const SolveOutcome out = solve_system(sys, starts, StepperConfig::defaults(Variant::G));
  CHECK(out.roots.empty());
  REQUIRE(out.non_root_critical.size() == 1);
  CHECK(std::abs(out.non_root_critical[0].x[0]) <= 1e-6);
  CHECK(out.non_root_critical[0].f == doctest::Approx(1.0));
}

TEST_CASE("solve_system accepts a start that is already a root") {
  const PolySystem sys({Polynomial(1, {{1.0, {1}}})});
  const SolveOutcome out = solve_system(sys, {{0.0}}, StepperConfig::defaults(Variant::G));
  REQUIRE(out.roots.size() == 1);
  CHECK(out.roots[0].first[0] == 0.0);
  CHECK(out.roots[0].second == 0.0);
}

TEST_CASE("parser handles coefficients, powers and implicit ones") {
  const Polynomial p = parse_polynomial("3*x1^2*x2 - 1.5*x2 + 2", 2);
  CHECK(p == Polynomial(2, {{3.0, {2, 1}}, {-1.5, {0, 1}}, {2.0, {0, 0}}}));

  CHECK(parse_polynomial("x1 - x2", 2) == Polynomial(2, {{1.0, {1, 0}}, {-1.0, {0, 1}}}));
  CHECK(parse_polynomial("x1^2+x2^2-1", 2) ==
        Polynomial(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-1.0, {0, 0}}}));
  CHECK(parse_polynomial("-x1", 1) == Polynomial(1, {{-1.0, {1}}}));
  CHECK(parse_polynomial("x1*x1*x1", 1) == Polynomial(1, {{1.0, {3}}}));
  CHECK(parse_polynomial("2 + 2", 1) == Polynomial(1, {{4.0, {0}}}));
}

TEST_CASE("system text parsing infers dimension, skips comments") {
  const PolySystem sys = parse_system_text("# unit circle meets diagonal\n"
                                           "x1^2 + x2^2 - 1\n"
                                           "\n"
                                           "x1 - x2\n");
  CHECK(sys.num_vars() == 2);
  CHECK(sys.polynomials().size() == 2);
  CHECK(sys.polynomials()[0] == circle_and_line().polynomials()[0]);
}

TEST_CASE("parser rejects malformed input with positions") {
  try {
    parse_system_text("x1 + @");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 6);
    CHECK(std::string(e.what()).find("parse error at 1:6") == 0);
  }

  try {
    parse_system_text("x1 - 1\nx2^x1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  CHECK_THROWS_AS(parse_system_text("x1^-2"), ParseError);
  CHECK_THROWS_AS(parse_system_text("x0 + 1"), ParseError);   // indices start at 1
  CHECK_THROWS_AS(parse_system_text("3 * * x1"), ParseError);
  CHECK_THROWS_AS(parse_system_text(""), ParseError);         // no polynomials
  CHECK_THROWS_AS(parse_system_text("# only a comment\n"), ParseError);
  CHECK_THROWS_AS(parse_system_text("1 + 2\n"), ParseError);  // no variables anywhere
  CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);     // index above num_vars
}

TEST_CASE("imaginary unit is rejected outside complex mode") {
  try {
    parse_system_text("x1 + i");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("--complex") != std::string::npos);
  }
}

TEST_CASE("complex parser reads i and z-variables") {
  using namespace std::complex_literals;
  const ComplexPolynomial p = parse_complex_polynomial("z1^2 - 1", 1);
  CHECK(p.monomials().size() == 2);
  CHECK(std::abs(p.eval({1.0 + 0.0i})) == 0.0);

  const ComplexPolynomial q = parse_complex_polynomial("2*i*z1 + z1^2 - i", 1);
  // at z = i: 2i*i + i^2 - i = -2 - 1 - i = -3 - i
  CHECK(std::abs(q.eval({1.0i}) - (-3.0 - 1.0i)) <= 1e-15);

  const auto sys = parse_complex_system_text("z1^2 - 1\n");
  REQUIRE(sys.size() == 1);
  CHECK(sys[0].num_vars() == 1);

  CHECK_THROWS_AS(parse_complex_system_text("x1 + 1"), ParseError);  // real names rejected
}

TEST_CASE("file parsers propagate open failures") {
  CHECK_THROWS_AS(parse_system_file("/nonexistent/system.txt"), std::runtime_error);
}
