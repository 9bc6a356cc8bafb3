#ifndef ASYMPTOPT_GEOMETRY_HPP
#define ASYMPTOPT_GEOMETRY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "asymptopt/common.hpp"
#include "asymptopt/poly.hpp"

namespace asymptopt {

// K = {x : A x >= b, E x = c}. Either block may be empty (0 rows).
class Polyhedron {
 public:
  Polyhedron(Matrix A, Vector b, Matrix E, Vector c);
  static Polyhedron from_inequalities(Matrix A, Vector b);
  static Polyhedron free_space(int n);
  static Polyhedron box(const Vector& lo, const Vector& hi);

  int dim() const { return n_; }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Matrix& E() const { return E_; }
  const Vector& c() const { return c_; }

  bool contains(const Vector& x, double tol = 1e-9) const;
  double max_violation(const Vector& x) const;

  // Phase-1 feasibility probe, cached after the first call.
  bool is_empty() const;
  Vector feasible_point() const;  // throws on an empty polyhedron

  // K intersected with {-radius <= x_i <= radius}.
  Polyhedron intersect_box(double radius) const;

 private:
  int n_;
  Matrix A_, E_;
  Vector b_, c_;
  mutable std::optional<std::optional<Vector>> feasible_cache_;
};

// C = {x : A x >= 0, E x = 0}; contains 0, closed under t >= 0.
class PolyhedralCone {
 public:
  PolyhedralCone(Matrix A, Matrix E);
  static PolyhedralCone from_inequalities(Matrix A);
  static PolyhedralCone orthant(int n);
  static PolyhedralCone free_space(int n);

  int dim() const { return n_; }
  const Matrix& A() const { return A_; }
  const Matrix& E() const { return E_; }

  bool contains(const Vector& x, double tol = 1e-9) const;
  double max_violation(const Vector& x) const;
  Polyhedron as_polyhedron() const;

  // True iff C = {0}; decided by coordinate LPs over C intersected with
  // the unit box. Cached.
  bool is_zero_cone(double tol = 1e-7) const;

 private:
  int n_;
  Matrix A_, E_;
  mutable std::optional<bool> zero_cache_;
};

// Generator description: unit extreme rays of the pointed part plus an
// orthonormal basis of the lineality space. Rays are orthogonal to the
// lineality space and sorted lexicographically on rounded coordinates.
struct RayBasis {
  std::vector<Vector> rays;
  std::vector<Vector> lineality;

  // rays, then +lineality, then -lineality; spans the cone with
  // nonnegative weights.
  std::vector<Vector> generators() const;
};

struct PseudoFace {
  std::vector<int> alpha;  // active row indices, ascending
  bool nonempty = false;
};

PolyhedralCone recession_cone(const Polyhedron& P);

bool is_bounded(const Polyhedron& P, double tol = 1e-7);

// Double-description enumeration; throws CapExceeded beyond caps.
RayBasis extreme_rays(const PolyhedralCone& C, const Caps& caps = {});

// Euclidean projection onto P via a primal active-set method.
Vector project(const Polyhedron& P, const Vector& x, double tol = 1e-10,
               int max_iter = 0);
Vector project_cone(const PolyhedralCone& C, const Vector& x);

// Unit points of C, Dirichlet-weighted combinations of the generators;
// throws on the zero cone.
std::vector<Vector> sample_cone_sphere(const PolyhedralCone& C, int count,
                                       std::uint64_t seed, const Caps& caps = {});

// All 2^p index subsets, tagged nonempty via an LP probe on the open system.
std::vector<PseudoFace> pseudo_faces(const PolyhedralCone& C, const Caps& caps = {});

bool in_pseudo_face(const PolyhedralCone& C, const std::vector<int>& alpha,
                    const Vector& x, double tol = 1e-7);

}  // namespace asymptopt

#endif
