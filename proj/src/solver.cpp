#include "asymptopt/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "asymptopt/rng.hpp"

namespace asymptopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DescentResult {
  Vector x;
  double value;
  long iterations;
};

// Projected-gradient descent with Armijo backtracking on the polyhedron P.
DescentResult projected_descent(const Polyhedron& P, const Polynomial& f, Vector x,
                                int max_iters, double residual_tol) {
  double t = 1.0;
  double fx = f.evaluate(x);
  long iters = 0;
  for (int it = 0; it < max_iters; ++it) {
    ++iters;
    const Vector g = f.gradient_at(x);
    const double residual = (x - project(P, x - g)).norm();
    if (residual <= residual_tol) break;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      const Vector xn = project(P, x - t * g);
      const double fn = f.evaluate(xn);
      if (fn <= fx + 1e-4 * g.dot(xn - x)) {
        const double step = (xn - x).norm();
        x = xn;
        fx = fn;
        accepted = true;
        t *= 1.6;
        if (step < 1e-13) it = max_iters;  // converged in place
        break;
      }
      t *= 0.5;
      if (t < 1e-14) break;
    }
    if (!accepted) break;
  }
  return {x, fx, iters};
}

struct MultistartResult {
  double best = kInf;
  std::vector<Vector> minimizers;  // within value_tol of best, deduped, sorted
  long iterations = 0;
  bool boundary_touched = false;
};

bool lex_less_pt(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

MultistartResult multistart_descent(const Polyhedron& boxed, const Polynomial& f,
                                    double radius, const SolveOptions& opts, Rng& rng) {
  const int n = boxed.dim();
  MultistartResult out;
  std::vector<Vector> seeds;
  seeds.push_back(boxed.feasible_point());
  for (int s = 1; s < opts.starts; ++s) {
    Vector raw(n);
    for (int i = 0; i < n; ++i) raw[i] = rng.uniform(-radius, radius);
    seeds.push_back(project(boxed, raw));
  }

  std::vector<std::pair<double, Vector>> endpoints;
  for (const Vector& s : seeds) {
    DescentResult r = projected_descent(boxed, f, s, opts.max_descent_iters, opts.tol.tol_proj);
    out.iterations += r.iterations;
    endpoints.emplace_back(r.value, r.x);
    out.best = std::min(out.best, r.value);
  }
  for (const auto& [value, x] : endpoints) {
    if (value > out.best + opts.value_tol) continue;
    bool dup = false;
    for (const Vector& m : out.minimizers)
      if ((m - x).norm() <= opts.dedupe_radius) {
        dup = true;
        break;
      }
    if (dup) continue;
    out.minimizers.push_back(x);
    if (x.cwiseAbs().maxCoeff() >= radius - std::max(1e-6, 1e-9 * radius))
      out.boundary_touched = true;
  }
  std::sort(out.minimizers.begin(), out.minimizers.end(), lex_less_pt);
  return out;
}

bool sets_agree(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.empty() || b.empty()) return false;
  auto one_sided = [tol](const std::vector<Vector>& from, const std::vector<Vector>& to) {
    for (const Vector& x : from) {
      double best = kInf;
      for (const Vector& y : to) best = std::min(best, (x - y).norm());
      if (best > tol) return false;
    }
    return true;
  };
  return one_sided(a, b) && one_sided(b, a);
}

// Smallest t beyond which the univariate polynomial is strictly decreasing:
// a Cauchy bound on the roots of its derivative (leading coefficient < 0).
double decrease_threshold(const std::vector<double>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < 1e-300) --deg;
  if (deg <= 0) return 0.0;
  // derivative coefficients
  std::vector<double> dc(deg);
  for (int i = 1; i <= deg; ++i) dc[i - 1] = coeffs[i] * i;
  int dd = deg - 1;
  double bound = 0.0;
  for (int i = 0; i < dd; ++i) bound = std::max(bound, std::abs(dc[i] / dc[dd]));
  return 1.0 + bound;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kFoundMinimum: return "FoundMinimum";
    case SolveStatus::kUnboundedBelow: return "UnboundedBelow";
    case SolveStatus::kInconclusive: return "Inconclusive";
  }
  return "?";
}

double kkt_stationarity_residual(const Polyhedron& K, const Polynomial& f, const Vector& x) {
  return (x - project(K, x - f.gradient_at(x))).norm();
}

DescentCertificate descent_ray_certificate(const Polyhedron& K, const Polynomial& f,
                                           const RegularityVerdict& verdict) {
  if (verdict.status != RegStatus::kRegularUnboundedBelow)
    throw std::invalid_argument("descent certificate needs a RegularUnboundedBelow verdict");
  if (verdict.witnesses.empty())
    throw std::invalid_argument("verdict carries no descent direction");
  DescentCertificate cert;
  cert.ray = verdict.witnesses.front();
  cert.anchor = K.feasible_point();
  const std::vector<double> restricted = f.restrict_to_ray(cert.anchor, cert.ray);
  cert.t0 = decrease_threshold(restricted);
  for (double t : {1.0, 10.0, 100.0, 1000.0})
    cert.table.emplace_back(t, f.evaluate(cert.anchor + t * cert.ray));
  return cert;
}

SolveReport solve(const Polyhedron& K, const Polynomial& f, const SolveOptions& opts) {
  if (K.is_empty()) throw std::invalid_argument("infeasible constraint set");
  const int d = opts.ambient_degree < 0 ? f.degree() : opts.ambient_degree;
  if (d < 1) throw std::invalid_argument("objective degree must be >= 1");

  SolveReport report;
  MinOnSphereOptions sphere = opts.sphere;
  sphere.tol_opt = std::min(sphere.tol_opt, opts.tol.tol_opt);
  sphere.seed = opts.seed ^ 0x5eedu;
  const AsymptoticProblem ap =
      opts.cone_override ? make_asymptotic_problem(*opts.cone_override, f, d)
                         : make_asymptotic_problem(K, f, d);
  report.verdict = classify(ap, opts.tol.tol_mu, sphere);

  Rng rng(opts.seed);

  if (report.verdict.status == RegStatus::kRegularUnboundedBelow) {
    report.status = SolveStatus::kUnboundedBelow;
    report.value = -kInf;
    report.certificate = descent_ray_certificate(K, f, report.verdict);
    return report;
  }
  if (report.verdict.status == RegStatus::kIndeterminate) {
    report.status = SolveStatus::kInconclusive;
    return report;
  }

  const bool coercive = report.verdict.status == RegStatus::kRegularCoercive;
  double radius = opts.box_init;
  std::optional<MultistartResult> prev;
  int stable_rounds = 0;
  for (int round = 0; round < opts.caps.max_doublings; ++round) {
    Polyhedron boxed = K.intersect_box(radius);
    report.box_trace.push_back(radius);
    if (boxed.is_empty()) {  // K sits outside the current box
      radius *= 2.0;
      continue;
    }
    MultistartResult cur = multistart_descent(boxed, f, radius, opts, rng);
    report.iterations += cur.iterations;

    if (coercive) {
      if (!cur.boundary_touched) {
        report.status = SolveStatus::kFoundMinimum;
        report.minimizers = cur.minimizers;
        report.value = cur.best;
        break;
      }
    } else {
      if (prev && !cur.boundary_touched &&
          std::abs(cur.best - prev->best) <= 1e-7 * (1.0 + std::abs(cur.best)) &&
          sets_agree(cur.minimizers, prev->minimizers, 1e-5)) {
        ++stable_rounds;
      } else {
        stable_rounds = 0;
      }
      if (stable_rounds >= 2) {
        report.status = SolveStatus::kFoundMinimum;
        report.minimizers = cur.minimizers;
        report.value = cur.best;
        report.heuristic = true;
        break;
      }
      prev = std::move(cur);
    }
    radius *= 2.0;
  }

  if (report.status != SolveStatus::kFoundMinimum) {
    report.status = SolveStatus::kInconclusive;
    return report;
  }

  // Polish on the unboxed set and report the worst stationarity residual.
  double worst = 0.0;
  for (Vector& m : report.minimizers) {
    double r = kkt_stationarity_residual(K, f, m);
    if (r > opts.tol.tol_proj) {
      DescentResult polished = projected_descent(K, f, m, opts.max_descent_iters, 1e-10);
      if (polished.value <= f.evaluate(m) + 1e-12) {
        m = polished.x;
        r = kkt_stationarity_residual(K, f, m);
      }
      report.iterations += polished.iterations;
    }
    worst = std::max(worst, r);
  }
  report.kkt_residual = worst;
  // values may shift marginally after polishing
  for (const Vector& m : report.minimizers)
    report.value = std::min(report.value, f.evaluate(m));
  return report;
}

EavesReport eaves_check(const Polyhedron& K, const Polynomial& f,
                        const RegularityVerdict& verdict, const EavesOptions& opts) {
  if (verdict.status != RegStatus::kNonRegular)
    throw std::invalid_argument("Eaves check needs a NonRegular verdict");
  EavesReport report;
  const std::vector<Polynomial> grad = f.gradient();
  Rng rng(opts.seed);

  for (const Vector& v : verdict.witnesses) {
    // q(x) = <grad f(x), v>, to be driven strictly positive somewhere on K
    Polynomial q = Polynomial::zero(f.n());
    for (int i = 0; i < f.n(); ++i) q = q + grad[i] * v[i];
    const Polynomial neg_q = q * -1.0;

    EavesRayRecord rec;
    rec.v = v;
    double best = -kInf;
    Vector best_x;
    double radius = opts.box_init;
    bool last_boundary = false;
    for (int round = 0; round < opts.box_rounds && best <= opts.strict_tol; ++round) {
      Polyhedron boxed = K.intersect_box(radius);
      if (boxed.is_empty()) {
        radius *= 2.0;
        continue;
      }
      std::vector<Vector> seeds;
      seeds.push_back(boxed.feasible_point());
      for (int s = 1; s < opts.starts; ++s) {
        Vector raw(K.dim());
        for (int i = 0; i < K.dim(); ++i) raw[i] = rng.uniform(-radius, radius);
        seeds.push_back(project(boxed, raw));
      }
      last_boundary = false;
      for (const Vector& s : seeds) {
        DescentResult r =
            projected_descent(boxed, neg_q, s, opts.max_descent_iters, 1e-9);
        const double val = -r.value;
        if (val > best) {
          best = val;
          best_x = r.x;
        }
        if (r.x.cwiseAbs().maxCoeff() >= radius - 1e-6) last_boundary = true;
      }
      radius *= 2.0;
    }
    rec.inner_product = best;
    if (best_x.size() > 0) rec.found_x = best_x;
    rec.met = best > opts.strict_tol;
    // not met, and the maximizer kept escaping to the box boundary: the
    // supremum may still be positive further out
    rec.undetermined = !rec.met && last_boundary;
    report.records.push_back(std::move(rec));
  }

  report.condition_a_holds = !report.records.empty();
  for (const EavesRayRecord& r : report.records)
    if (!r.met) report.condition_a_holds = false;

  if (report.condition_a_holds) {
    if (opts.assertion == ConvexityAssertion::kNone)
      report.conclusion =
          "condition (a) holds; existence follows only under the pseudoconvexity "
          "hypothesis, which was not asserted";
    else
      report.conclusion = "condition (a) holds: Sol(K,f) is nonempty and compact";
  } else {
    bool undet = false;
    for (const EavesRayRecord& r : report.records) undet = undet || r.undetermined;
    report.conclusion = undet ? "condition (a) undetermined within the search budget"
                              : "condition (a) fails on at least one witness ray";
  }
  return report;
}

ConvexityProbeResult convexity_probe(const Polyhedron& K, const Polynomial& f, int samples,
                                     std::uint64_t seed) {
  if (K.is_empty()) throw std::invalid_argument("infeasible constraint set");
  ConvexityProbeResult out;
  out.samples = samples;
  Rng rng(seed);
  const Vector anchor = K.feasible_point();
  const int n = K.dim();
  int psd = 0;
  double worst = kInf;
  for (int s = 0; s < samples; ++s) {
    Vector raw(n);
    const double scale = (s % 3 == 0) ? 1.0 : (s % 3 == 1 ? 5.0 : 25.0);
    for (int i = 0; i < n; ++i) raw[i] = anchor[i] + scale * rng.gaussian();
    const Vector x = project(K, raw);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(f.hessian_at(x));
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin >= -1e-8)
      ++psd;
    else if (lmin < worst)
      out.counterexample = x;
    worst = std::min(worst, lmin);
  }
  out.psd_fraction = samples > 0 ? static_cast<double>(psd) / samples : 0.0;
  out.worst_eigenvalue = samples > 0 ? worst : 0.0;
  return out;
}

OptimalValue optimal_value(const Polyhedron& K, const Polynomial& f,
                           const SolveOptions& opts) {
  const SolveReport report = solve(K, f, opts);
  switch (report.status) {
    case SolveStatus::kFoundMinimum:
      return {OptimalValue::Kind::kFinite, report.value};
    case SolveStatus::kUnboundedBelow:
      return {OptimalValue::Kind::kMinusInfinity, -kInf};
    case SolveStatus::kInconclusive:
      break;
  }
  return {OptimalValue::Kind::kUnknown, 0.0};
}

}  // namespace asymptopt
