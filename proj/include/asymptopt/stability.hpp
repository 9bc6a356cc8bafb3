#ifndef ASYMPTOPT_STABILITY_HPP
#define ASYMPTOPT_STABILITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asymptopt/solver.hpp"

namespace asymptopt {

// Objective perturbation family: f + eps * g over unit directions g.
struct PerturbationPlan {
  Polynomial base = Polynomial::zero(1);
  int ambient_degree = 0;
  std::vector<Polynomial> directions;  // unit norm in the degree-d basis
  std::vector<double> scales;          // strictly decreasing positive
  std::uint64_t seed = 0;
};

// Random sphere directions in the coefficient space, optionally preceded by
// the coordinate monomial directions.
PerturbationPlan make_perturbation_plan(const Polynomial& f, int d, int random_directions,
                                        const std::vector<double>& scales,
                                        std::uint64_t seed, bool monomial_directions = true);

std::vector<double> geometric_scales(double first, double factor, int count);

struct StabilityCell {
  int direction_id;
  double epsilon;
  double value_gap;  // |phi(f + eps g) - phi(f)|
  double excess;     // sup over found minimizers of d(x, Sol(K, f))
  SolveStatus status;
};

struct StabilityReport {
  std::vector<StabilityCell> cells;
  std::optional<double> H_hat;
  std::optional<double> ell_hat;
  double L_hat = 0.0;
  int usable_scales = 0;
  bool insufficient_data = false;
  bool anomalous_exponent = false;  // fitted H outside (0, 2]
  std::string caveat;
};

// Log-log fit of excess against epsilon across the plan (the upper-Hoelder
// experiment). Distances use the solver's finite minimizer list, an
// overestimate of the true distance when Sol is a continuum.
StabilityReport holder_experiment(const Polyhedron& K, const Polynomial& f,
                                  const PerturbationPlan& plan,
                                  const SolveOptions& opts = {});

struct LocalBoundednessResult {
  double radius;       // max norm of any found minimizer
  bool all_bounded;    // every perturbed solve returned FoundMinimum
  bool flagged;        // base problem not regular: no guarantee applies
};

LocalBoundednessResult local_boundedness_probe(const Polyhedron& K, const Polynomial& f,
                                               double eps, int num_directions,
                                               std::uint64_t seed,
                                               const SolveOptions& opts = {});

struct UscScaleResult {
  double epsilon;
  bool contained;  // Sol(K, f + eps g) inside Sol(K, f) + delta B for all g
  bool skipped;    // a solve came back Inconclusive
};

std::vector<UscScaleResult> usc_probe(const Polyhedron& K, const Polynomial& f,
                                      const std::vector<double>& shrinking_scales,
                                      double delta, int num_directions, std::uint64_t seed,
                                      const SolveOptions& opts = {});

struct GkDetection {
  int k;
  bool unbounded_detected;  // solve on g^k = f - (1/k)(xbar_l x_l)^d hit -inf
};

struct LipschitzResult {
  std::vector<StabilityCell> cells;
  double L_hat = 0.0;
  int violations = 0;  // gap/eps jumps by > 10x between adjacent scales
  std::vector<GkDetection> gk;
};

// Value-gap sweep plus, for non-regular bases, the g^k construction that
// drives the optimal value to -inf.
LipschitzResult value_lipschitz_experiment(const Polyhedron& K, const Polynomial& f,
                                           const PerturbationPlan& plan,
                                           const SolveOptions& opts = {}, int gk_count = 10);

struct ErrorBoundResult {
  double c_hat = 0.0;
  double H_hat = 0.0;
  double violation_fraction = 0.0;
  int pairs = 0;
  bool degenerate = false;  // all residuals ~ 0
};

// Samples x near Sol(K, f), pairs d(x, Sol) with the natural residual
// F(f, x), and fits the enveloping bound d <= c F^H.
ErrorBoundResult error_bound_probe(const Polyhedron& K, const Polynomial& f,
                                   double region_halfwidth, int count, std::uint64_t seed,
                                   const SolveOptions& opts = {});

}  // namespace asymptopt

#endif
