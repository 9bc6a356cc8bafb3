#ifndef ASYMPTOPT_SOLVER_HPP
#define ASYMPTOPT_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asymptopt/geometry.hpp"
#include "asymptopt/poly.hpp"
#include "asymptopt/regularity.hpp"

namespace asymptopt {

enum class SolveStatus { kFoundMinimum, kUnboundedBelow, kInconclusive };

std::string to_string(SolveStatus s);

struct SolveOptions {
  int ambient_degree = -1;  // -1: use degree(f)
  std::optional<PolyhedralCone> cone_override;
  double box_init = 10.0;
  int starts = 12;
  int max_descent_iters = 600;
  double value_tol = 1e-7;     // minimizers kept within this of the best value
  double dedupe_radius = 1e-6;
  std::uint64_t seed = 0;
  Tolerances tol;
  Caps caps;
  MinOnSphereOptions sphere;
};

// Demonstrates unboundedness along a recession direction.
struct DescentCertificate {
  Vector ray;     // unit v in K_infinity with f_d(v) < 0
  Vector anchor;  // feasible base point
  std::vector<std::pair<double, double>> table;  // (t, f(anchor + t v))
  double t0;      // f(anchor + t v) strictly decreases for t >= t0
};

struct SolveReport {
  SolveStatus status = SolveStatus::kInconclusive;
  std::vector<Vector> minimizers;
  double value = 0.0;  // -inf when unbounded below
  std::optional<DescentCertificate> certificate;
  double kkt_residual = 0.0;  // projected-gradient residual on K
  long iterations = 0;
  std::vector<double> box_trace;  // box radii visited
  bool heuristic = false;         // non-regular pathway, box-stability only
  RegularityVerdict verdict{RegStatus::kIndeterminate, 0.0, {}, 0.0};
};

// Global minimization of f over the polyhedron K, dispatched on the
// regularity verdict of the asymptotic problem.
SolveReport solve(const Polyhedron& K, const Polynomial& f, const SolveOptions& opts = {});

// Requires a RegularUnboundedBelow verdict.
DescentCertificate descent_ray_certificate(const Polyhedron& K, const Polynomial& f,
                                           const RegularityVerdict& verdict);

enum class ConvexityAssertion { kNone, kPseudoconvex, kConvex };

struct EavesOptions {
  double strict_tol = 1e-7;
  int starts = 8;
  int box_rounds = 3;
  double box_init = 10.0;
  int max_descent_iters = 400;
  std::uint64_t seed = 0;
  ConvexityAssertion assertion = ConvexityAssertion::kPseudoconvex;
};

struct EavesRayRecord {
  Vector v;
  std::optional<Vector> found_x;
  double inner_product = 0.0;  // best <grad f(x), v> seen
  bool met = false;
  bool undetermined = false;   // budget exhausted with the sup still growing
};

struct EavesReport {
  std::vector<EavesRayRecord> records;
  bool condition_a_holds = false;
  std::string conclusion;
};

// Condition (a) search for non-regular problems: for each witness ray v,
// look for x in K with <grad f(x), v> strictly positive.
EavesReport eaves_check(const Polyhedron& K, const Polynomial& f,
                        const RegularityVerdict& verdict, const EavesOptions& opts = {});

struct ConvexityProbeResult {
  double psd_fraction = 0.0;
  std::optional<Vector> counterexample;
  double worst_eigenvalue = 0.0;
  int samples = 0;
};

// Samples Hessian eigenvalues at feasible points. A probe, not a certificate.
ConvexityProbeResult convexity_probe(const Polyhedron& K, const Polynomial& f, int samples,
                                     std::uint64_t seed);

struct OptimalValue {
  enum class Kind { kFinite, kMinusInfinity, kUnknown };
  Kind kind;
  double value = 0.0;  // meaningful only when kind == kFinite
};

OptimalValue optimal_value(const Polyhedron& K, const Polynomial& f,
                           const SolveOptions& opts = {});

// Projected-gradient stationarity residual ||x - proj_K(x - grad f(x))||.
double kkt_stationarity_residual(const Polyhedron& K, const Polynomial& f, const Vector& x);

}  // namespace asymptopt

#endif
