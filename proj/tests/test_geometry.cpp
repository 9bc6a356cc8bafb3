#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymptopt/geometry.hpp"
#include "asymptopt/linprog.hpp"
#include "asymptopt/rng.hpp"

using namespace asymptopt;

namespace {

Vector pt(std::initializer_list<double> v) {
  Vector x(static_cast<int>(v.size()));
  int i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> rs) {
  const int m = static_cast<int>(rs.size());
  const int n = static_cast<int>(rs.begin()->size());
  Matrix M(m, n);
  int r = 0;
  for (const auto& row : rs) {
    int c = 0;
    for (double v : row) M(r, c++) = v;
    ++r;
  }
  return M;
}

// K = {x1 >= 1, x2 >= 1}, the running counterexample set
Polyhedron shifted_quadrant() {
  return Polyhedron::from_inequalities(rows({{1, 0}, {0, 1}}), pt({1, 1}));
}

Polyhedron unit_box(int n) {
  return Polyhedron::box(Vector::Zero(n), Vector::Ones(n));
}

bool has_ray(const RayBasis& rb, const Vector& v, double tol = 1e-8) {
  for (const Vector& r : rb.rays)
    if ((r - v).norm() <= tol) return true;
  return false;
}

// L1-fit of x as a nonnegative ray combination plus lineality combination.
double ray_fit_residual(const RayBasis& rb, const Vector& x) {
  const int n = static_cast<int>(x.size());
  const int nr = static_cast<int>(rb.rays.size());
  const int nl = static_cast<int>(rb.lineality.size());
  LinearProgram lp(nr + nl + 2 * n);
  Vector obj = Vector::Zero(nr + nl + 2 * n);
  for (int i = 0; i < 2 * n; ++i) obj[nr + nl + i] = 1.0;
  lp.set_objective(obj);
  for (int i = 0; i < nr; ++i) lp.mark_nonnegative(i);
  for (int i = 0; i < 2 * n; ++i) lp.mark_nonnegative(nr + nl + i);
  for (int row = 0; row < n; ++row) {
    Vector a = Vector::Zero(nr + nl + 2 * n);
    for (int i = 0; i < nr; ++i) a[i] = rb.rays[i][row];
    for (int j = 0; j < nl; ++j) a[nr + j] = rb.lineality[j][row];
    a[nr + nl + row] = 1.0;
    a[nr + nl + n + row] = -1.0;
    lp.add_row(a, RowSense::kEq, x[row]);
  }
  const LpResult res = lp.solve();
  REQUIRE(res.status == LpStatus::kOptimal);
  return res.objective;
}

}  // namespace

TEST_CASE("simplex solves small LPs") {
  {  // min -x - y over the unit box corner
    LinearProgram lp(2);
    lp.set_objective(pt({-1, -1}));
    lp.add_bounds(0, 0, 1);
    lp.add_bounds(1, 0, 2);
    const LpResult r = lp.solve();
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(2.0));
    CHECK(r.objective == doctest::Approx(-3.0));
  }
  {  // infeasible
    LinearProgram lp(1);
    lp.add_row(pt({1}), RowSense::kGe, 2);
    lp.add_row(pt({1}), RowSense::kLe, 1);
    CHECK(lp.solve().status == LpStatus::kInfeasible);
  }
  {  // unbounded
    LinearProgram lp(1);
    lp.set_objective(pt({-1}));
    lp.add_row(pt({1}), RowSense::kGe, 0);
    CHECK(lp.solve().status == LpStatus::kUnbounded);
  }
  {  // equality + free variable
    LinearProgram lp(2);
    lp.set_objective(pt({0, 1}));
    lp.add_row(pt({1, 1}), RowSense::kEq, 1);
    lp.add_row(pt({0, 1}), RowSense::kGe, -5);
    const LpResult r = lp.solve();
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.x[1] == doctest::Approx(-5.0));
    CHECK(r.x[0] == doctest::Approx(6.0));
  }
}

TEST_CASE("nnls recovers nonnegative combinations") {
  Matrix A = rows({{1, 0}, {0, 1}});
  const Vector w = nnls(A, pt({2, 3}));
  CHECK(w[0] == doctest::Approx(2.0));
  CHECK(w[1] == doctest::Approx(3.0));
  const Vector w2 = nnls(A, pt({-1, 1}));  // clamped at zero
  CHECK(w2[0] == doctest::Approx(0.0));
  CHECK(w2[1] == doctest::Approx(1.0));
}

TEST_CASE("recession cones of the paper sets") {
  const PolyhedralCone c1 = recession_cone(shifted_quadrant());
  CHECK(c1.contains(pt({3, 0})));
  CHECK(c1.contains(pt({0, 7})));
  CHECK(!c1.contains(pt({-1, 0})));
  CHECK(!c1.is_zero_cone());

  CHECK(recession_cone(unit_box(2)).is_zero_cone());

  // a cone is its own recession cone
  const Polyhedron cone_like =
      Polyhedron::from_inequalities(rows({{1, 0}, {-1, 1}}), pt({0, 0}));
  const PolyhedralCone c3 = recession_cone(cone_like);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Vector x = pt({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    CHECK(cone_like.contains(x, 1e-9) == c3.contains(x, 1e-9));
  }

  const Polyhedron empty =
      Polyhedron::from_inequalities(rows({{1}, {-1}}), pt({2, -1}));
  CHECK(empty.is_empty());
  CHECK_THROWS_AS(recession_cone(empty), std::invalid_argument);
}

TEST_CASE("boundedness via the recession cone") {
  CHECK(is_bounded(unit_box(2)));
  CHECK(is_bounded(unit_box(3)));
  CHECK(!is_bounded(shifted_quadrant()));
  CHECK(!is_bounded(Polyhedron::from_inequalities(rows({{1}}), pt({0}))));
}

TEST_CASE("extreme rays: orthant, wedge, halfplane") {
  const RayBasis orthant = extreme_rays(PolyhedralCone::orthant(2));
  REQUIRE(orthant.rays.size() == 2);
  CHECK(orthant.lineality.empty());
  CHECK(has_ray(orthant, pt({1, 0})));
  CHECK(has_ray(orthant, pt({0, 1})));

  const RayBasis wedge =
      extreme_rays(PolyhedralCone::from_inequalities(rows({{1, 0}, {-1, 1}})));
  REQUIRE(wedge.rays.size() == 2);
  CHECK(wedge.lineality.empty());
  CHECK(has_ray(wedge, pt({0, 1})));
  CHECK(has_ray(wedge, pt({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)})));

  const RayBasis halfplane =
      extreme_rays(PolyhedralCone::from_inequalities(rows({{1, 0}})));
  REQUIRE(halfplane.rays.size() == 1);
  REQUIRE(halfplane.lineality.size() == 1);
  CHECK(has_ray(halfplane, pt({1, 0})));
  CHECK(std::abs(halfplane.lineality[0][1]) == doctest::Approx(1.0));

  const RayBasis free2 = extreme_rays(PolyhedralCone::free_space(2));
  CHECK(free2.rays.empty());
  CHECK(free2.lineality.size() == 2);

  CHECK_THROWS_AS(extreme_rays(PolyhedralCone::orthant(9)), CapExceeded);
}

TEST_CASE("extreme rays with equality rows") {
  // {x : x1 - x2 = 0, x1 >= 0} is the single ray through (1,1)
  const PolyhedralCone C(rows({{1, 0}}), rows({{1, -1}}));
  const RayBasis rb = extreme_rays(C);
  REQUIRE(rb.rays.size() == 1);
  CHECK(rb.lineality.empty());
  CHECK(has_ray(rb, pt({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)})));
}

TEST_CASE("projection onto polyhedra") {
  CHECK((project(PolyhedralCone::orthant(2).as_polyhedron(), pt({-1, 2})) - pt({0, 2})).norm() <=
        1e-9);
  CHECK((project(shifted_quadrant(), pt({0, 0})) - pt({1, 1})).norm() <= 1e-9);

  const Polyhedron plane(Matrix(0, 2), Vector(0), rows({{1, 1}}), pt({1}));
  CHECK((project(plane, pt({0, 0})) - pt({0.5, 0.5})).norm() <= 1e-9);

  // idempotence and fixed points on random data
  Rng rng(17);
  const Polyhedron K = shifted_quadrant();
  for (int i = 0; i < 100; ++i) {
    const Vector x = pt({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const Vector px = project(K, x);
    CHECK(K.contains(px, 1e-9));
    CHECK((project(K, px) - px).norm() <= 1e-8);
    // projection inequality: the residual x - px is normal to K at px
    const Vector y = project(K, pt({rng.uniform(1, 6), rng.uniform(1, 6)}));
    CHECK((x - px).dot(y - px) <= 1e-7);
  }
}

TEST_CASE("projection onto a wedge stays optimal against sampling") {
  const Polyhedron wedge =
      Polyhedron::from_inequalities(rows({{1, 0}, {-1, 1}}), pt({0, 0}));
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const Vector x = pt({rng.uniform(-4, 4), rng.uniform(-4, 4)});
    const Vector px = project(wedge, x);
    REQUIRE(wedge.contains(px, 1e-9));
    const double d = (x - px).norm();
    for (int s = 0; s < 200; ++s) {
      Vector y = pt({rng.uniform(0, 5), 0});
      y[1] = y[0] + rng.uniform(0, 5);
      CHECK(d <= (x - y).norm() + 1e-8);
    }
  }
}

TEST_CASE("cone sphere sampling") {
  const PolyhedralCone orthant = PolyhedralCone::orthant(2);
  for (const Vector& v : sample_cone_sphere(orthant, 64, 5)) {
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v[0] >= -1e-9);
    CHECK(v[1] >= -1e-9);
  }

  const PolyhedralCone single_ray(rows({{1, 0}}), rows({{1, -1}}));
  for (const Vector& v : sample_cone_sphere(single_ray, 8, 5))
    CHECK((v - pt({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)})).norm() <= 1e-9);

  const PolyhedralCone zero(rows({{1}, {-1}}), Matrix(0, 1));
  CHECK(zero.is_zero_cone());
  CHECK_THROWS_AS(sample_cone_sphere(zero, 4, 5), std::invalid_argument);
}

TEST_CASE("pseudo-faces of the orthant") {
  const auto faces = pseudo_faces(PolyhedralCone::orthant(2));
  REQUIRE(faces.size() == 4);
  for (const PseudoFace& f : faces) CHECK(f.nonempty);
}

TEST_CASE("pseudo-faces of the pinched line") {
  const PolyhedralCone C = PolyhedralCone::from_inequalities(rows({{1}, {-1}}));
  const auto faces = pseudo_faces(C);
  REQUIRE(faces.size() == 4);
  for (const PseudoFace& f : faces) {
    if (f.alpha.size() == 2)
      CHECK(f.nonempty);
    else
      CHECK(!f.nonempty);
  }
}

TEST_CASE("property: pseudo-faces partition the cone") {
  const PolyhedralCone C = PolyhedralCone::from_inequalities(rows({{1, 0}, {-1, 2}}));
  const auto faces = pseudo_faces(C);
  const auto samples = sample_cone_sphere(C, 1000, 11);
  for (const Vector& x : samples) {
    int hits = 0;
    for (const PseudoFace& f : faces)
      if (f.nonempty && in_pseudo_face(C, f.alpha, x, 1e-7)) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("property: recession directions stay inside") {
  const Polyhedron K = shifted_quadrant();
  const PolyhedralCone C = recession_cone(K);
  Rng rng(31);
  const auto dirs = sample_cone_sphere(C, 20, 13);
  for (int i = 0; i < 50; ++i) {
    const Vector x = project(K, pt({rng.uniform(-3, 9), rng.uniform(-3, 9)}));
    for (const Vector& v : dirs)
      for (double t : {1.0, 10.0, 100.0}) CHECK(K.contains(x + t * v, 1e-7));
  }
}

TEST_CASE("property: ray soundness and completeness") {
  Rng rng(41);
  const std::vector<PolyhedralCone> cones = {
      PolyhedralCone::orthant(2),
      PolyhedralCone::orthant(3),
      PolyhedralCone::from_inequalities(rows({{1, 0}, {-1, 1}})),
      PolyhedralCone::from_inequalities(rows({{1, 0, 0}, {0, 1, -1}})),
      PolyhedralCone::from_inequalities(rows({{1, 2, -1}, {0, 1, 1}, {1, 0, 0}})),
  };
  for (const PolyhedralCone& C : cones) {
    const RayBasis rb = extreme_rays(C);
    for (const Vector& r : rb.rays) {
      CHECK(C.contains(r, 1e-9));
      CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const Vector& l : rb.lineality) {
      CHECK(C.contains(l, 1e-9));
      CHECK(C.contains(-l, 1e-9));
    }
    if (!C.is_zero_cone()) {
      for (const Vector& x : sample_cone_sphere(C, 100, 29))
        CHECK(ray_fit_residual(rb, 3.7 * x) <= 1e-7);
    }
  }
}

TEST_CASE("property: K + recession cone stays in K") {
  const Polyhedron K =
      Polyhedron::from_inequalities(rows({{1, 1}, {1, -1}, {0, 1}}), pt({1, -2, 0}));
  REQUIRE(!K.is_empty());
  const PolyhedralCone C = recession_cone(K);
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const Vector x = project(K, pt({rng.uniform(-4, 8), rng.uniform(-4, 8)}));
    for (const Vector& v : sample_cone_sphere(C, 5, 1000 + i))
      CHECK(K.contains(x + rng.uniform(0, 20) * v, 1e-7));
  }
}

TEST_CASE("feasibility probe is a distinct detectable state") {
  const Polyhedron empty = Polyhedron::from_inequalities(rows({{1}, {-1}}), pt({3, -2}));
  CHECK(empty.is_empty());
  CHECK_THROWS_AS(empty.feasible_point(), std::invalid_argument);
  CHECK_THROWS_AS(project(empty, pt({0})), std::invalid_argument);

  const Polyhedron K = shifted_quadrant();
  CHECK(!K.is_empty());
  CHECK(K.contains(K.feasible_point(), 1e-9));
}
