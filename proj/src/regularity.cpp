#include "asymptopt/regularity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "asymptopt/linprog.hpp"
#include "asymptopt/rng.hpp"

namespace asymptopt {

namespace {

constexpr double kInvalid = 1e300;

Vector project_simplex(const Vector& y) {
  const int k = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int rho = 0;
  for (int j = 0; j < k; ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / (j + 1);
    if (u[j] - t > 0) {
      rho = j + 1;
      tau = t;
    }
  }
  (void)rho;
  Vector w(k);
  for (int i = 0; i < k; ++i) w[i] = std::max(y[i] - tau, 0.0);
  return w;
}

struct SphereObjective {
  const Matrix& G;  // n x k generator matrix
  const Polynomial& h;

  double value(const Vector& w, Vector* point = nullptr) const {
    Vector u = G * w;
    const double nu = u.norm();
    if (nu < 1e-12) return kInvalid;
    u /= nu;
    if (point) *point = u;
    return h.evaluate(u);
  }

  Vector grad(const Vector& w) const {
    Vector u = G * w;
    const double nu = u.norm();
    if (nu < 1e-12) return Vector::Zero(w.size());
    const Vector v = u / nu;
    Vector g = h.gradient_at(v);
    g -= v.dot(g) * v;
    return G.transpose() * (g / nu);
  }
};

struct Candidate {
  Vector v;
  double value;
};

// Projected-gradient descent with Armijo backtracking on the weight simplex.
Candidate refine(const SphereObjective& obj, Vector w, int max_iter) {
  double t = 1.0;
  Vector point;
  double f = obj.value(w, &point);
  if (f >= kInvalid) return {Vector(), kInvalid};
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = obj.grad(w);
    bool accepted = false;
    for (int half = 0; half < 50; ++half) {
      const Vector wn = project_simplex(w - t * g);
      Vector pn;
      const double fn = obj.value(wn, &pn);
      const double decrease = g.dot(wn - w);
      if (fn < kInvalid && fn <= f + 1e-4 * decrease) {
        const double step = (wn - w).norm();
        w = wn;
        f = fn;
        point = pn;
        accepted = true;
        t *= 1.6;
        if (step < 1e-12) return {point, f};
        break;
      }
      t *= 0.5;
      if (t < 1e-14) return {point, f};
    }
    if (!accepted) return {point, f};
  }
  return {point, f};
}

// Deterministic unit directions in R^k: endpoints, a circle, or a Fibonacci
// sphere. Used as the n <= 3 cross-check net in the ambient null(E) chart.
std::vector<Vector> sphere_net(int k, int budget) {
  std::vector<Vector> pts;
  if (k == 1) {
    pts.push_back(Vector::Constant(1, 1.0));
    pts.push_back(Vector::Constant(1, -1.0));
  } else if (k == 2) {
    for (int i = 0; i < budget; ++i) {
      const double th = 2.0 * M_PI * i / budget;
      Vector v(2);
      v << std::cos(th), std::sin(th);
      pts.push_back(v);
    }
  } else if (k == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < budget; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / budget;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = 2.0 * M_PI * i / golden;
      Vector v(3);
      v << r * std::cos(th), r * std::sin(th), z;
      pts.push_back(v);
    }
  }
  return pts;
}

// Orthonormal basis of null(E); identity chart when E is empty.
Matrix nullspace_chart(const PolyhedralCone& C) {
  const int n = C.dim();
  if (C.E().rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(C.E(), Eigen::ComputeFullV);
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-11 * std::max(1.0, smax)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

void push_candidate(std::vector<Candidate>& out, Candidate c) {
  if (c.value < kInvalid && c.v.size() > 0) out.push_back(std::move(c));
}

}  // namespace

std::string to_string(RegStatus s) {
  switch (s) {
    case RegStatus::kRegularCoercive: return "RegularCoercive";
    case RegStatus::kRegularUnboundedBelow: return "RegularUnboundedBelow";
    case RegStatus::kNonRegular: return "NonRegular";
    case RegStatus::kIndeterminate: return "Indeterminate";
  }
  return "?";
}

AsymptoticProblem make_asymptotic_problem(const PolyhedralCone& cone, const Polynomial& f,
                                          int d) {
  if (d < 1) throw std::invalid_argument("ambient degree must be >= 1");
  if (f.degree() > d)
    throw std::invalid_argument("ambient degree below the objective degree");
  return {cone, f.homogeneous_component(d), d};
}

AsymptoticProblem make_asymptotic_problem(const Polyhedron& K, const Polynomial& f, int d) {
  return make_asymptotic_problem(recession_cone(K), f, d);
}

MinOnSphereResult min_on_cone_sphere(const PolyhedralCone& C, const Polynomial& h,
                                     const MinOnSphereOptions& opts) {
  if (!h.is_zero() && !h.is_homogeneous(h.degree()))
    throw std::invalid_argument("min_on_cone_sphere needs a homogeneous objective");
  MinOnSphereResult res;
  if (C.is_zero_cone()) {
    res.mu = std::numeric_limits<double>::infinity();
    return res;
  }

  const RayBasis rb = extreme_rays(C, opts.caps);
  const std::vector<Vector> gens = rb.generators();
  const int k = static_cast<int>(gens.size());
  const int n = C.dim();
  Matrix G(n, k);
  for (int i = 0; i < k; ++i) G.col(i) = gens[i];
  const SphereObjective obj{G, h};

  std::vector<Candidate> cands;

  if (h.is_zero()) {
    // Everything on the slice is optimal; report seed representatives.
    for (int i = 0; i < k; ++i)
      push_candidate(cands, {gens[i], 0.0});
    Rng rng(opts.seed);
    for (int s = 0; s < opts.num_samples; ++s) {
      const std::vector<double> wv = rng.simplex_weights(k);
      Vector u = Vector::Zero(n);
      for (int i = 0; i < k; ++i) u += wv[i] * gens[i];
      if (u.norm() > 1e-9) push_candidate(cands, {u / u.norm(), 0.0});
    }
  } else {
    // Seed set: vertices of the weight simplex (the generators themselves),
    // pairwise midpoints, and Dirichlet samples.
    std::vector<Vector> seeds;
    for (int i = 0; i < k; ++i) seeds.push_back(Vector::Unit(k, i));
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Vector w = Vector::Zero(k);
        w[i] = w[j] = 0.5;
        seeds.push_back(w);
      }
    Rng rng(opts.seed);
    for (int s = 0; s < opts.num_samples; ++s) {
      const std::vector<double> wv = rng.simplex_weights(k);
      seeds.push_back(Eigen::Map<const Vector>(wv.data(), k));
    }
    for (const Vector& w : seeds)
      push_candidate(cands, refine(obj, w, opts.max_iterations));
  }

  double mu = std::numeric_limits<double>::infinity();
  for (const Candidate& c : cands) mu = std::min(mu, c.value);

  // Cross-check against a deterministic sphere net in the null(E) chart.
  if (opts.grid_cross_check && !h.is_zero()) {
    const Matrix N = nullspace_chart(C);
    const int kc = static_cast<int>(N.cols());
    if (kc >= 1 && kc <= 3) {
      const int budget = kc <= 1 ? 2 : (kc == 2 ? 720 : 2562);
      std::vector<Vector> net = sphere_net(kc, budget);
      std::vector<Vector> feasible;
      for (const Vector& z : net) {
        const Vector v = N * z;
        if (C.contains(v, 1e-9)) feasible.push_back(v);
      }
      if (static_cast<int>(feasible.size()) < std::min<int>(8, budget)) {
        for (const Vector& z : net) {
          Vector v = project_cone(C, N * z);
          if (v.norm() > 1e-9) feasible.push_back(v / v.norm());
        }
      }
      Candidate best{Vector(), kInvalid};
      for (const Vector& v : feasible) {
        const double val = h.evaluate(v);
        if (val < best.value) best = {v, val};
      }
      if (best.value < kInvalid) {
        push_candidate(cands, best);
        if (best.value < mu - 0.5 * opts.tol_opt) {
          // the multistart missed this basin; re-seed from the net winner
          Vector w = nnls(G, best.v);
          if (w.sum() > 1e-12) {
            w /= w.sum();
            push_candidate(cands, refine(obj, w, opts.max_iterations));
          }
        }
        for (const Candidate& c : cands) mu = std::min(mu, c.value);
      }
    }
  }

  res.mu = mu;

  std::vector<Candidate> near;
  for (const Candidate& c : cands)
    if (c.value <= mu + opts.tol_opt) near.push_back(c);
  std::sort(near.begin(), near.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    for (int i = 0; i < a.v.size(); ++i) {
      if (a.v[i] < b.v[i] - 1e-12) return true;
      if (a.v[i] > b.v[i] + 1e-12) return false;
    }
    return false;
  });
  for (const Candidate& c : near) {
    bool dup = false;
    for (const Vector& v : res.argmins)
      if ((v - c.v).norm() <= opts.dedupe_radius) {
        dup = true;
        break;
      }
    if (!dup) res.argmins.push_back(c.v);
    if (static_cast<int>(res.argmins.size()) >= opts.max_argmins) break;
  }
  return res;
}

RegularityVerdict classify(const AsymptoticProblem& ap, double tol,
                           const MinOnSphereOptions& opts) {
  RegularityVerdict verdict;
  verdict.tol = tol;
  if (ap.cone.is_zero_cone()) {
    verdict.status = RegStatus::kRegularCoercive;
    verdict.mu = std::numeric_limits<double>::infinity();
    return verdict;
  }
  MinOnSphereResult r = min_on_cone_sphere(ap.cone, ap.leading_form, opts);
  verdict.mu = r.mu;
  verdict.witnesses = r.argmins;
  if (!r.converged)
    verdict.status = RegStatus::kIndeterminate;
  else if (r.mu > tol)
    verdict.status = RegStatus::kRegularCoercive;
  else if (r.mu < -tol)
    verdict.status = RegStatus::kRegularUnboundedBelow;
  else
    verdict.status = RegStatus::kNonRegular;
  return verdict;
}

AsymptoticSolutionSet asymptotic_solution_set(const AsymptoticProblem& ap,
                                              const RegularityVerdict& verdict) {
  (void)ap;
  switch (verdict.status) {
    case RegStatus::kRegularCoercive:
      return {AsymptoticSolutionSet::Kind::kOrigin, {}};
    case RegStatus::kNonRegular:
      return {AsymptoticSolutionSet::Kind::kRays, verdict.witnesses};
    case RegStatus::kRegularUnboundedBelow:
      return {AsymptoticSolutionSet::Kind::kEmpty, {}};
    case RegStatus::kIndeterminate:
      break;
  }
  throw std::invalid_argument("no asymptotic solution set for an indeterminate verdict");
}

}  // namespace asymptopt
