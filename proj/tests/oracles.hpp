#ifndef ASYMPTOPT_TESTS_ORACLES_HPP
#define ASYMPTOPT_TESTS_ORACLES_HPP

// Test-only reference computations. These stay independent of the library's
// ray-simplex optimizer: the sphere is parameterized by angles in an
// orthonormal chart of null(E) and scanned on a dense grid.

#include "asymptopt/geometry.hpp"
#include "asymptopt/poly.hpp"

namespace asymptopt::oracles {

struct GridMin {
  double mu;
  Vector argmin;
  bool found = false;
};

// Dense angular grid over C intersect S^{n-1} (n <= 3), followed by local
// zoom refinements around the incumbent.
GridMin grid_min_on_cone_sphere(const PolyhedralCone& C, const Polynomial& h,
                                double resolution, int zoom_rounds = 3);

// Brute-force minimum of f over K intersect [-radius, radius]^n on a uniform
// grid with per_axis points per coordinate.
GridMin grid_min_on_box(const Polyhedron& K, const Polynomial& f, double radius,
                        int per_axis);

}  // namespace asymptopt::oracles

#endif
