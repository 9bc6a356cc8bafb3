#ifndef ASYMPTOPT_REGULARITY_HPP
#define ASYMPTOPT_REGULARITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "asymptopt/geometry.hpp"
#include "asymptopt/poly.hpp"

namespace asymptopt {

// The pair (K_infinity, f_d) whose solution set decides regularity.
struct AsymptoticProblem {
  PolyhedralCone cone;
  Polynomial leading_form;  // homogeneous of ambient_degree, or zero
  int ambient_degree;
};

enum class RegStatus {
  kRegularCoercive,        // mu > tol: leading form positive on the cone sphere
  kRegularUnboundedBelow,  // mu < -tol: leading form negative somewhere
  kNonRegular,             // |mu| <= tol: zero set of f_d meets the cone sphere
  kIndeterminate,          // optimizer did not converge
};

std::string to_string(RegStatus s);

struct RegularityVerdict {
  RegStatus status;
  double mu;  // min of f_d over cone /\ unit sphere; +inf when the cone is {0}
  std::vector<Vector> witnesses;
  double tol;
};

struct MinOnSphereOptions {
  double tol_opt = 1e-6;
  int num_samples = 64;   // Dirichlet-weighted seeds on the generator simplex
  int max_iterations = 400;
  double dedupe_radius = 1e-5;
  int max_argmins = 64;
  bool grid_cross_check = true;  // deterministic sphere net, used when n <= 3
  std::uint64_t seed = 0;
  Caps caps;
};

struct MinOnSphereResult {
  double mu;
  std::vector<Vector> argmins;
  bool converged = true;
};

// Pairs the recession cone of K (or a user-supplied cone) with the degree-d
// homogeneous component of f. Requires d >= 1 and d >= degree(f).
AsymptoticProblem make_asymptotic_problem(const Polyhedron& K, const Polynomial& f, int d);
AsymptoticProblem make_asymptotic_problem(const PolyhedralCone& cone, const Polynomial& f,
                                          int d);

// Minimum of the homogeneous form h over C /\ S^{n-1}. Multistart projected
// gradient on the ray-coefficient simplex, cross-checked against a
// deterministic sphere net for n <= 3. mu = +inf with no argmins when
// C = {0}.
MinOnSphereResult min_on_cone_sphere(const PolyhedralCone& C, const Polynomial& h,
                                     const MinOnSphereOptions& opts = {});

RegularityVerdict classify(const AsymptoticProblem& ap, double tol = 1e-6,
                           const MinOnSphereOptions& opts = {});

struct AsymptoticSolutionSet {
  enum class Kind { kOrigin, kRays, kEmpty };
  Kind kind;
  std::vector<Vector> rays;  // unit representatives, one per witness ray
};

AsymptoticSolutionSet asymptotic_solution_set(const AsymptoticProblem& ap,
                                              const RegularityVerdict& verdict);

}  // namespace asymptopt

#endif
