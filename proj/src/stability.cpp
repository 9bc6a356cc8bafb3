#include "asymptopt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "asymptopt/rng.hpp"

namespace asymptopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance_to_set(const Vector& x, const std::vector<Vector>& set) {
  double best = kInf;
  for (const Vector& y : set) best = std::min(best, (x - y).norm());
  return best;
}

Polynomial random_unit_direction(int n, int d, Rng& rng) {
  Polynomial g = random_polynomial(n, d, rng);
  const double nrm = l2_norm(g, d);
  if (nrm < 1e-12) return random_unit_direction(n, d, rng);
  return g * (1.0 / nrm);
}

struct LogLogFit {
  double slope;
  double intercept;
  int count;
};

LogLogFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(xy.size());
  const double denom = m * sxx - sx * sx;
  const double slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  const double intercept = (sy - slope * sx) / m;
  return {slope, intercept, static_cast<int>(xy.size())};
}

SolveOptions fork_opts(const SolveOptions& base, std::uint64_t salt) {
  SolveOptions o = base;
  o.seed = base.seed ^ salt;
  return o;
}

}  // namespace

std::vector<double> geometric_scales(double first, double factor, int count) {
  if (first <= 0 || factor <= 0 || factor >= 1 || count < 1)
    throw std::invalid_argument("scales must decrease from a positive start");
  std::vector<double> s(count);
  s[0] = first;
  for (int i = 1; i < count; ++i) s[i] = s[i - 1] * factor;
  return s;
}

PerturbationPlan make_perturbation_plan(const Polynomial& f, int d, int random_directions,
                                        const std::vector<double>& scales,
                                        std::uint64_t seed, bool monomial_directions) {
  if (scales.empty()) throw std::invalid_argument("empty scale list");
  for (size_t i = 1; i < scales.size(); ++i)
    if (scales[i] >= scales[i - 1] || scales[i] <= 0)
      throw std::invalid_argument("scales must be strictly decreasing and positive");
  PerturbationPlan plan;
  plan.base = f;
  plan.ambient_degree = d;
  plan.scales = scales;
  plan.seed = seed;
  if (monomial_directions) {
    const MonomialBasis basis = MonomialBasis::full(f.n(), d);
    for (const Exponents& e : basis.monomials())
      plan.directions.push_back(Polynomial::term(f.n(), e, 1.0));
  }
  Rng rng(seed);
  for (int i = 0; i < random_directions; ++i)
    plan.directions.push_back(random_unit_direction(f.n(), d, rng));
  return plan;
}

StabilityReport holder_experiment(const Polyhedron& K, const Polynomial& f,
                                  const PerturbationPlan& plan, const SolveOptions& opts) {
  SolveOptions base_opts = opts;
  base_opts.ambient_degree = plan.ambient_degree;
  const SolveReport base = solve(K, f, base_opts);
  if (base.status != SolveStatus::kFoundMinimum)
    throw std::invalid_argument("Hoelder experiment needs a solved base problem");

  StabilityReport report;
  report.caveat =
      "distances use the discrete solved minimizer list; for continuum solution "
      "sets the excess overestimates d(x, Sol(K,f))";

  for (size_t j = 0; j < plan.directions.size(); ++j) {
    for (size_t k = 0; k < plan.scales.size(); ++k) {
      const double eps = plan.scales[k];
      const Polynomial perturbed = f + plan.directions[j] * eps;
      const SolveReport r =
          solve(K, perturbed, fork_opts(base_opts, 0x9000u + 131 * j + k));
      StabilityCell cell{static_cast<int>(j), eps, 0.0, 0.0, r.status};
      if (r.status == SolveStatus::kFoundMinimum) {
        cell.value_gap = std::abs(r.value - base.value);
        for (const Vector& x : r.minimizers)
          cell.excess = std::max(cell.excess, distance_to_set(x, base.minimizers));
        report.L_hat = std::max(report.L_hat, cell.value_gap / eps);
      }
      report.cells.push_back(cell);
    }
  }

  std::vector<std::pair<double, double>> fit_pairs;
  std::vector<double> used_scales;
  for (const StabilityCell& c : report.cells) {
    if (c.status != SolveStatus::kFoundMinimum || c.excess <= 1e-10) continue;
    fit_pairs.emplace_back(c.epsilon, c.excess);
    used_scales.push_back(c.epsilon);
  }
  std::sort(used_scales.begin(), used_scales.end());
  used_scales.erase(std::unique(used_scales.begin(), used_scales.end()), used_scales.end());
  report.usable_scales = static_cast<int>(used_scales.size());

  const bool two_decades =
      !used_scales.empty() && used_scales.back() >= 100.0 * used_scales.front();
  if (report.usable_scales < 3 || !two_decades) {
    report.insufficient_data = true;
    return report;
  }
  const LogLogFit fit = fit_loglog(fit_pairs);
  report.H_hat = fit.slope;
  report.ell_hat = std::exp(fit.intercept);
  report.anomalous_exponent = !(fit.slope > 0.0 && fit.slope <= 2.0);
  return report;
}

LocalBoundednessResult local_boundedness_probe(const Polyhedron& K, const Polynomial& f,
                                               double eps, int num_directions,
                                               std::uint64_t seed, const SolveOptions& opts) {
  if (eps <= 0) throw std::invalid_argument("need a positive perturbation radius");
  const int d = opts.ambient_degree > 0 ? opts.ambient_degree : f.degree();
  SolveOptions sopts = opts;
  sopts.ambient_degree = d;

  const SolveReport base = solve(K, f, sopts);
  LocalBoundednessResult out{0.0, true, false};
  out.flagged = base.verdict.status != RegStatus::kRegularCoercive &&
                base.verdict.status != RegStatus::kRegularUnboundedBelow;

  const MonomialBasis basis = MonomialBasis::full(f.n(), d);
  Rng rng(seed);
  for (int j = 0; j < num_directions; ++j) {
    // uniform in the eps-ball of the coefficient space
    const Polynomial dir = random_unit_direction(f.n(), d, rng);
    const double radius =
        eps * std::pow(rng.uniform01(), 1.0 / static_cast<double>(basis.size()));
    const SolveReport r = solve(K, f + dir * radius, fork_opts(sopts, 0xb0000u + j));
    if (r.status != SolveStatus::kFoundMinimum) {
      out.all_bounded = false;
      continue;
    }
    for (const Vector& x : r.minimizers) out.radius = std::max(out.radius, x.norm());
  }
  return out;
}

std::vector<UscScaleResult> usc_probe(const Polyhedron& K, const Polynomial& f,
                                      const std::vector<double>& shrinking_scales,
                                      double delta, int num_directions, std::uint64_t seed,
                                      const SolveOptions& opts) {
  SolveOptions sopts = opts;
  if (sopts.ambient_degree < 0) sopts.ambient_degree = f.degree();
  const SolveReport base = solve(K, f, sopts);
  if (base.status != SolveStatus::kFoundMinimum)
    throw std::invalid_argument("usc probe needs a solved base problem");

  Rng rng(seed);
  std::vector<Polynomial> dirs;
  for (int j = 0; j < num_directions; ++j)
    dirs.push_back(random_unit_direction(f.n(), sopts.ambient_degree, rng));

  std::vector<UscScaleResult> out;
  for (size_t k = 0; k < shrinking_scales.size(); ++k) {
    const double eps = shrinking_scales[k];
    UscScaleResult res{eps, true, false};
    for (size_t j = 0; j < dirs.size(); ++j) {
      const SolveReport r =
          solve(K, f + dirs[j] * eps, fork_opts(sopts, 0xc0000u + 97 * k + j));
      if (r.status != SolveStatus::kFoundMinimum) {
        res.skipped = true;
        continue;
      }
      for (const Vector& x : r.minimizers)
        if (distance_to_set(x, base.minimizers) > delta) res.contained = false;
    }
    out.push_back(res);
  }
  return out;
}

LipschitzResult value_lipschitz_experiment(const Polyhedron& K, const Polynomial& f,
                                           const PerturbationPlan& plan,
                                           const SolveOptions& opts, int gk_count) {
  SolveOptions sopts = opts;
  sopts.ambient_degree = plan.ambient_degree;
  const SolveReport base = solve(K, f, sopts);
  if (base.status != SolveStatus::kFoundMinimum)
    throw std::invalid_argument("Lipschitz experiment needs a finite base value");

  LipschitzResult out;
  for (size_t j = 0; j < plan.directions.size(); ++j) {
    double prev_ratio = -1.0;
    for (size_t k = 0; k < plan.scales.size(); ++k) {
      const double eps = plan.scales[k];
      const SolveReport r =
          solve(K, f + plan.directions[j] * eps, fork_opts(sopts, 0xd0000u + 131 * j + k));
      StabilityCell cell{static_cast<int>(j), eps, 0.0, 0.0, r.status};
      if (r.status == SolveStatus::kFoundMinimum) {
        cell.value_gap = std::abs(r.value - base.value);
        const double ratio = cell.value_gap / eps;
        out.L_hat = std::max(out.L_hat, ratio);
        if (prev_ratio > 1e-300 && ratio > 10.0 * prev_ratio) ++out.violations;
        prev_ratio = ratio;
      }
      out.cells.push_back(cell);
    }
  }

  // Non-regular base: the g^k family forces phi = -inf for every k.
  if (base.verdict.status == RegStatus::kNonRegular && !base.verdict.witnesses.empty()) {
    const Vector& xbar = base.verdict.witnesses.front();
    int l = 0;
    for (int i = 1; i < xbar.size(); ++i)
      if (std::abs(xbar[i]) > std::abs(xbar[l])) l = i;
    const int d = plan.ambient_degree;
    Exponents e(f.n(), 0);
    e[l] = d;
    const double coef = std::pow(std::abs(xbar[l]), d) * (xbar[l] < 0 && d % 2 ? -1.0 : 1.0);
    for (int k = 1; k <= gk_count; ++k) {
      const Polynomial gk = f - Polynomial::term(f.n(), e, coef / k);
      const SolveReport r = solve(K, gk, fork_opts(sopts, 0xe0000u + k));
      out.gk.push_back({k, r.status == SolveStatus::kUnboundedBelow});
    }
  }
  return out;
}

ErrorBoundResult error_bound_probe(const Polyhedron& K, const Polynomial& f,
                                   double region_halfwidth, int count, std::uint64_t seed,
                                   const SolveOptions& opts) {
  SolveOptions sopts = opts;
  if (sopts.ambient_degree < 0) sopts.ambient_degree = f.degree();
  const SolveReport base = solve(K, f, sopts);
  if (base.status != SolveStatus::kFoundMinimum)
    throw std::invalid_argument("error bound probe needs a finite optimal value");

  // residual F(f, x): equality mismatches + inequality violations + value gap
  auto residual = [&](const Vector& x) {
    double F = 0.0;
    for (int r = 0; r < K.E().rows(); ++r)
      F += std::abs(K.E().row(r).dot(x) - K.c()[r]);
    for (int r = 0; r < K.A().rows(); ++r)
      F += std::max(0.0, K.b()[r] - K.A().row(r).dot(x));
    F += std::abs(f.evaluate(x) - base.value);
    return F;
  };

  Rng rng(seed);
  std::vector<std::pair<double, double>> pairs;  // (F, d)
  const int n = K.dim();
  for (int s = 0; s < count; ++s) {
    const Vector& center = base.minimizers[s % base.minimizers.size()];
    Vector x(n);
    for (int i = 0; i < n; ++i)
      x[i] = center[i] + rng.uniform(-region_halfwidth, region_halfwidth);
    const double Fx = residual(x);
    const double dx = distance_to_set(x, base.minimizers);
    if (Fx > 1e-12 && dx > 1e-12) pairs.emplace_back(Fx, dx);
  }

  ErrorBoundResult out;
  out.pairs = static_cast<int>(pairs.size());
  if (pairs.size() < 10) {
    out.degenerate = true;
    return out;
  }
  const LogLogFit fit = fit_loglog(pairs);
  out.H_hat = fit.slope;
  // envelope intercept: 99th percentile of log d - H log F
  std::vector<double> offsets;
  offsets.reserve(pairs.size());
  for (const auto& [F, dd] : pairs) offsets.push_back(std::log(dd) - fit.slope * std::log(F));
  std::sort(offsets.begin(), offsets.end());
  const size_t q = std::min(pairs.size() - 1,
                            static_cast<size_t>(std::ceil(0.99 * pairs.size())));
  out.c_hat = std::exp(offsets[q]);
  int violations = 0;
  for (const auto& [F, dd] : pairs)
    if (dd > out.c_hat * std::pow(F, out.H_hat) * (1.0 + 1e-9)) ++violations;
  out.violation_fraction = static_cast<double>(violations) / pairs.size();
  return out;
}

}  // namespace asymptopt
