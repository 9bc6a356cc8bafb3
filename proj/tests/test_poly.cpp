#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymptopt/poly.hpp"
#include "asymptopt/rng.hpp"

using namespace asymptopt;

namespace {

Vector pt(std::initializer_list<double> v) {
  Vector x(static_cast<int>(v.size()));
  int i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// f(x1,x2) = x2^3 - x1*x2, the running two-variable example
Polynomial cubic_example() {
  return Polynomial::term(2, {0, 3}, 1.0) - Polynomial::term(2, {1, 1}, 1.0);
}

Polynomial quadratic_family(double a2, double a1, double a0) {
  return Polynomial::term(1, {2}, a2) + Polynomial::term(1, {1}, a1) +
         Polynomial::constant(1, a0);
}

}  // namespace

TEST_CASE("evaluate on the paper fixtures") {
  const Polynomial xy = Polynomial::term(2, {1, 1}, 1.0);
  CHECK(xy.evaluate(pt({1, 1})) == 1.0);
  CHECK(cubic_example().evaluate(pt({2, 1})) == -1.0);
  CHECK(quadratic_family(1, 0, -1).evaluate(pt({2})) == 3.0);
  CHECK_THROWS_AS(xy.evaluate(pt({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("gradient matches the worked example") {
  // (1/6)x2^3 + (1/2)x1^2 - x1 x2
  const Polynomial f = Polynomial::term(2, {0, 3}, 1.0 / 6.0) +
                       Polynomial::term(2, {2, 0}, 0.5) - Polynomial::term(2, {1, 1}, 1.0);
  const auto g = f.gradient();
  // d/dx1 = x1 - x2
  CHECK(g[0].coeff({1, 0}) == doctest::Approx(1.0));
  CHECK(g[0].coeff({0, 1}) == doctest::Approx(-1.0));
  CHECK(g[0].terms().size() == 2);
  // d/dx2 = -x1 + (1/2)x2^2
  CHECK(g[1].coeff({1, 0}) == doctest::Approx(-1.0));
  CHECK(g[1].coeff({0, 2}) == doctest::Approx(0.5));
  CHECK(g[1].terms().size() == 2);

  const auto gc = Polynomial::constant(3, 5.0).gradient();
  for (const auto& gi : gc) CHECK(gi.is_zero());

  const auto gxy = Polynomial::term(2, {1, 1}, 1.0).gradient();
  CHECK(gxy[0].coeff({0, 1}) == 1.0);
  CHECK(gxy[1].coeff({1, 0}) == 1.0);
}

TEST_CASE("homogeneous components") {
  const Polynomial f = cubic_example();
  const Polynomial f3 = f.homogeneous_component(3);
  CHECK(f3.coeff({0, 3}) == 1.0);
  CHECK(f3.terms().size() == 1);
  const Polynomial f2 = f.homogeneous_component(2);
  CHECK(f2.coeff({1, 1}) == -1.0);
  CHECK(f2.terms().size() == 1);
  const Polynomial g = Polynomial::variable(2, 0) + Polynomial::constant(2, 1.0);
  CHECK(g.homogeneous_component(5).is_zero());
}

TEST_CASE("leading limit schedule") {
  const Polynomial p = Polynomial::term(1, {2}, 1.0) + Polynomial::term(1, {1}, 1.0);
  const auto vals = leading_limit_check(p, pt({1}), {10, 100, 1000});
  CHECK(vals[0] == doctest::Approx(1.1));
  CHECK(vals[1] == doctest::Approx(1.01));
  CHECK(vals[2] == doctest::Approx(1.001));

  const Polynomial xy = Polynomial::term(2, {1, 1}, 1.0);
  for (double v : leading_limit_check(xy, pt({1, 1}), {3, 17, 70}))
    CHECK(v == doctest::Approx(1.0));

  const auto cube = leading_limit_check(cubic_example(), pt({1, 1}), {100});
  CHECK(cube[0] == doctest::Approx(1.0 - 1e-2));

  CHECK_THROWS_AS(leading_limit_check(xy, pt({1, 1}), {}), std::invalid_argument);
}

TEST_CASE("l2 norm in the ambient basis") {
  CHECK(l2_norm(Polynomial::term(2, {1, 0}, 3.0), 1) == doctest::Approx(3.0));
  CHECK(l2_norm(quadratic_family(2, -1, 0.5), 2) ==
        doctest::Approx(std::sqrt(4.0 + 1.0 + 0.25)));
  CHECK(l2_norm(Polynomial::variable(2, 0) + Polynomial::variable(2, 1), 2) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(l2_norm(cubic_example(), 2), std::invalid_argument);
}

TEST_CASE("Cauchy-Schwarz bound") {
  const auto b1 = cauchy_schwarz_bound(Polynomial::variable(1, 0), pt({0}), 1);
  CHECK(b1.bound == doctest::Approx(1.0));
  CHECK(b1.value == 0.0);

  const auto b2 = cauchy_schwarz_bound(Polynomial::term(2, {1, 1}, 1.0), pt({1, 1}), 2);
  CHECK(b2.value == doctest::Approx(1.0));
  CHECK(b2.bound == doctest::Approx(std::sqrt(6.0)));

  const auto b3 = cauchy_schwarz_bound(Polynomial::constant(2, 1.0), pt({-3, 2}), 2);
  CHECK(b3.bound >= b3.value);
  CHECK(b3.value == 1.0);
}

TEST_CASE("coefficient vector listing order and round trip") {
  const MonomialBasis basis = MonomialBasis::full(2, 2);
  REQUIRE(basis.size() == 6);  // C(4,2)
  CHECK(basis.monomials()[0] == Exponents{0, 0});
  CHECK(basis.monomials()[1] == Exponents{1, 0});
  CHECK(basis.monomials()[2] == Exponents{0, 1});
  CHECK(basis.monomials()[3] == Exponents{2, 0});
  CHECK(basis.monomials()[4] == Exponents{1, 1});
  CHECK(basis.monomials()[5] == Exponents{0, 2});

  Rng rng(7);
  const Polynomial p = random_polynomial(2, 2, rng);
  const Vector coeffs = basis.coefficients(p);
  const Polynomial back = basis.polynomial(coeffs);
  CHECK((basis.coefficients(back) - coeffs).norm() == 0.0);

  CHECK(MonomialBasis::full(3, 4).size() == 35);  // C(7,4)
}

TEST_CASE("random polynomials: determinism and support") {
  const Polynomial a = random_polynomial(1, 2, 99u);
  const Polynomial b = random_polynomial(1, 2, 99u);
  REQUIRE(a.terms().size() == b.terms().size());
  for (const auto& [e, c] : a.terms()) CHECK(b.coeff(e) == c);

  const Polynomial h = random_polynomial(3, 3, 4u, CoeffDistribution::kUniform, true);
  for (int l = 0; l < 3; ++l) CHECK(h.homogeneous_component(l).is_zero());

  int nonzero = 0;
  Rng rng(123);
  for (int i = 0; i < 10000; ++i) {
    const Polynomial q = random_polynomial(1, 2, rng);
    if (q.coeff({2}) != 0.0) ++nonzero;
  }
  CHECK(nonzero == 10000);
}

TEST_CASE("property: homogeneity of components") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const int d = 1 + trial % 4;
    const Polynomial p = random_polynomial(n, d, rng);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-2, 2);
    const double t = rng.uniform(0, 3);
    for (int l = 0; l <= d; ++l) {
      const Polynomial pl = p.homogeneous_component(l);
      const double lhs = pl.evaluate(t * x);
      double tl = 1.0;
      for (int q = 0; q < l; ++q) tl *= t;
      const double rhs = tl * pl.evaluate(x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: components sum back to the polynomial, term-wise") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Polynomial p = random_polynomial(2 + trial % 2, 3, rng);
    Polynomial sum = Polynomial::zero(p.n());
    for (int l = 0; l <= p.degree(); ++l) sum = sum + p.homogeneous_component(l);
    REQUIRE(sum.terms().size() == p.terms().size());
    for (const auto& [e, c] : p.terms()) CHECK(sum.coeff(e) == c);
  }
}

TEST_CASE("property: limit consistency of the leading form") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const int d = 1 + trial % 4;
    const Polynomial p = random_polynomial(n, d, rng);
    if (p.degree() != d) continue;
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.5, 1.5);
    const Polynomial pd = p.homogeneous_component(d);
    const double limit = pd.evaluate(x);
    const MonomialBasis basis = MonomialBasis::full(n, d);
    const double envelope = l2_norm(p, d) * basis.evaluate(x).norm();
    const auto vals = leading_limit_check(p, x, {1e3, 1e6});
    CHECK(std::abs(vals[0] - limit) <= envelope * 1e-3 + 1e-12);
    CHECK(std::abs(vals[1] - limit) <= envelope * 1e-6 + 1e-12);
    CHECK(std::abs(vals[1] - limit) <= std::abs(vals[0] - limit) + 1e-12);
  }
}

TEST_CASE("property: Cauchy-Schwarz holds on random pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 3;
    const int d = 1 + trial % 3;
    const Polynomial p = random_polynomial(n, d, rng);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-3, 3);
    const auto cs = cauchy_schwarz_bound(p, x, d);
    CHECK(std::abs(cs.value) <= cs.bound * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("property: the leading-component map is 1-Lipschitz in coefficient norm") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 2;
    const int d = 2 + trial % 3;
    const Polynomial p = random_polynomial(n, d, rng);
    const Polynomial q = random_polynomial(n, d, rng);
    const double lhs = l2_norm(p.homogeneous_component(d) - q.homogeneous_component(d), d);
    const double rhs = l2_norm(p - q, d);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("zero polynomial bookkeeping") {
  const Polynomial z = Polynomial::zero(2);
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  const Polynomial cancel =
      Polynomial::term(2, {1, 0}, 1.0) - Polynomial::term(2, {1, 0}, 1.0);
  CHECK(cancel.is_zero());
  CHECK(l2_norm(z, 3) == 0.0);
}

TEST_CASE("restriction to a ray") {
  // f(x) = x1 x2 along x0 = (1,1), v = (2,0): f(x0 + tv) = (1 + 2t) * 1
  const Polynomial xy = Polynomial::term(2, {1, 1}, 1.0);
  const auto coeffs = xy.restrict_to_ray(pt({1, 1}), pt({2, 0}));
  REQUIRE(coeffs.size() == 3);
  CHECK(coeffs[0] == doctest::Approx(1.0));
  CHECK(coeffs[1] == doctest::Approx(2.0));
  CHECK(coeffs[2] == doctest::Approx(0.0));
}
