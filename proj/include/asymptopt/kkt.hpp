#ifndef ASYMPTOPT_KKT_HPP
#define ASYMPTOPT_KKT_HPP

#include <cstdint>
#include <vector>

#include "asymptopt/geometry.hpp"
#include "asymptopt/poly.hpp"

namespace asymptopt {

// h(x) = b' X_d(x), b indexed by the graded-lex degree-d monomial basis.
struct HomogeneousForm {
  int n;
  int d;
  Vector b;  // length C(n+d-1, d)

  static HomogeneousForm from_polynomial(const Polynomial& h, int d);
  Polynomial to_polynomial() const;
};

struct KKTPoint {
  Vector x;             // unit representative of the ray, or the origin
  Vector lambda;        // multipliers indexed by alpha
  std::vector<int> alpha;
  double residual;
  double min_jacobian_sv;  // smallest singular value of the face system Jacobian
  bool is_origin = false;

  // alpha multipliers scattered into a full-length vector (zeros elsewhere).
  Vector full_lambda(int rows) const;
};

struct KktEnumOptions {
  int starts_factor = 50;  // starts per face = factor * (n + |alpha|)
  int newton_iters = 80;
  double face_tol = 1e-7;
  double lambda_tol = 1e-9;
  double dedupe_radius = 1e-6;
  std::uint64_t seed = 0;
  Caps caps;
};

struct KktEnumStats {
  int faces = 0;           // nonempty pseudo-faces processed
  long starts = 0;
  long converged = 0;
  long raw_accepted = 0;   // in-face solutions before normalization + dedupe
  int deduped = 0;         // nonzero normalized representatives kept
  bool full_rank_A = true;
};

struct KktEnumResult {
  std::vector<KKTPoint> points;  // origin first, then lex order
  std::vector<Vector> raw_points;  // accepted solutions before normalization
  KktEnumStats stats;
};

// max of stationarity, complementarity and sign/feasibility violations at
// (x, lambda). Equality-row multipliers, if any, are minimized out.
double kkt_residual(const PolyhedralCone& C, const Polynomial& g, const Vector& x,
                    const Vector& lambda);

// Pseudo-face by pseudo-face multistart Newton on the square face system.
// Nonzero solutions are reported as sphere-normalized ray representatives;
// the origin is always included (for d >= 2 it is always a KKT point).
KktEnumResult enumerate_kkt(const PolyhedralCone& C, const HomogeneousForm& h,
                            const KktEnumOptions& opts = {});

struct RankCheckResult {
  int rank;
  double min_sv;  // n-th largest singular value
};

// Numerical rank of the n x eta Jacobian of grad(b' X_d(x)) with respect
// to b; the map is linear in b, so the matrix depends on x only.
RankCheckResult jacobian_rank_check(int n, int d, const Vector& x);

struct FinitenessResult {
  bool finite;
  int points;               // including the origin
  double min_isolation_sv;
};

FinitenessResult finiteness_probe(const PolyhedralCone& C, const HomogeneousForm& h,
                                  const KktEnumOptions& opts = {},
                                  double isolation_tol = 1e-7);

struct GenericityTrial {
  int index;
  bool regular;
  bool finite;
  double mu;
};

struct GenericityResult {
  double regular_fraction;
  double finite_kkt_fraction;
  std::vector<GenericityTrial> trials;
};

// Monte-Carlo sweep: random gaussian degree-d polynomials, classified for
// regularity; KKT finiteness checked on the leading form.
GenericityResult genericity_mc(const Polyhedron& K, int d, int trials, std::uint64_t seed,
                               const KktEnumOptions& opts = {});

}  // namespace asymptopt

#endif
