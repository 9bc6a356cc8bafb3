#include "asymptopt/kkt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "asymptopt/regularity.hpp"
#include "asymptopt/rng.hpp"

namespace asymptopt {

namespace {

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

bool lex_less_pt(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

// Square Jacobian of the face system at (x, lambda_alpha, nu):
//   [ H(x)   -A_a'   -E' ]
//   [ A_a     0       0  ]
//   [ E       0       0  ]
Matrix face_jacobian(const Matrix& H, const Matrix& Aa, const Matrix& E) {
  const int n = static_cast<int>(H.rows());
  const int m = static_cast<int>(Aa.rows());
  const int l = static_cast<int>(E.rows());
  Matrix J = Matrix::Zero(n + m + l, n + m + l);
  J.topLeftCorner(n, n) = H;
  if (m > 0) {
    J.block(0, n, n, m) = -Aa.transpose();
    J.block(n, 0, m, n) = Aa;
  }
  if (l > 0) {
    J.block(0, n + m, n, l) = -E.transpose();
    J.block(n + m, 0, l, n) = E;
  }
  return J;
}

double smallest_sv(const Matrix& J) {
  Eigen::JacobiSVD<Matrix> svd(J);
  const auto& s = svd.singularValues();
  return s.size() > 0 ? s[s.size() - 1] : 0.0;
}

}  // namespace

HomogeneousForm HomogeneousForm::from_polynomial(const Polynomial& h, int d) {
  if (!h.is_zero() && !h.is_homogeneous(d))
    throw std::invalid_argument("polynomial is not homogeneous of the given degree");
  const MonomialBasis basis = MonomialBasis::homogeneous(h.n(), d);
  return {h.n(), d, basis.coefficients(h)};
}

Polynomial HomogeneousForm::to_polynomial() const {
  return MonomialBasis::homogeneous(n, d).polynomial(b);
}

Vector KKTPoint::full_lambda(int rows) const {
  Vector full = Vector::Zero(rows);
  for (size_t j = 0; j < alpha.size(); ++j) full[alpha[j]] = lambda[j];
  return full;
}

double kkt_residual(const PolyhedralCone& C, const Polynomial& g, const Vector& x,
                    const Vector& lambda) {
  const Matrix& A = C.A();
  const Matrix& E = C.E();
  if (lambda.size() != A.rows()) throw std::invalid_argument("multiplier length mismatch");
  Vector stat = g.gradient_at(x);
  if (A.rows() > 0) stat -= A.transpose() * lambda;
  if (E.rows() > 0) {
    // best equality multipliers: remove the range(E') component
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Matrix(E.transpose()));
    stat -= E.transpose() * cod.solve(stat);
  }
  double res = stat.norm();
  if (A.rows() > 0) {
    const Vector ax = A * x;
    res = std::max(res, std::abs(lambda.dot(ax)));
    res = std::max(res, (-lambda).cwiseMax(0.0).maxCoeff());
    res = std::max(res, (-ax).cwiseMax(0.0).maxCoeff());
  }
  if (E.rows() > 0) res = std::max(res, (E * x).cwiseAbs().maxCoeff());
  return res;
}

KktEnumResult enumerate_kkt(const PolyhedralCone& C, const HomogeneousForm& h,
                            const KktEnumOptions& opts) {
  const int n = C.dim();
  const int p = static_cast<int>(C.A().rows());
  const int l = static_cast<int>(C.E().rows());
  if (h.n != n) throw std::invalid_argument("form dimension mismatch");
  if (n > opts.caps.max_dim || p > opts.caps.max_rows)
    throw CapExceeded("KKT enumeration cap exceeded");

  KktEnumResult result;
  {
    Eigen::JacobiSVD<Matrix> svd(C.A());
    int rank = 0;
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > 1e-10 * std::max(1.0, smax)) ++rank;
    result.stats.full_rank_A = p == 0 || rank == std::min(p, n);
  }

  const Polynomial g = h.to_polynomial();
  const auto grad = g.gradient();
  const int d = h.d;
  Rng rng(opts.seed);

  std::vector<KKTPoint> normalized;

  for (const PseudoFace& face : pseudo_faces(C, opts.caps)) {
    if (!face.nonempty) continue;
    ++result.stats.faces;
    const int m = static_cast<int>(face.alpha.size());
    Matrix Aa(m, n);
    for (int j = 0; j < m; ++j) Aa.row(j) = C.A().row(face.alpha[j]);
    const int N = n + m + l;

    // orthonormal basis of the face's equality subspace, for seeding
    Matrix eq(m + l, n);
    if (m > 0) eq.topRows(m) = Aa;
    if (l > 0) eq.bottomRows(l) = C.E();
    Matrix chart = Matrix::Identity(n, n);
    if (m + l > 0) {
      Eigen::JacobiSVD<Matrix> svd(eq, Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      const double smax = s.size() ? s[0] : 0.0;
      int rank = 0;
      for (int i = 0; i < s.size(); ++i)
        if (s[i] > 1e-11 * std::max(1.0, smax)) ++rank;
      if (rank == n) chart = Matrix::Zero(n, 0);  // face subspace is {0}
      else
        chart = svd.matrixV().rightCols(n - rank);
    }

    const int starts = opts.starts_factor * (n + m);
    std::vector<bool> strict(p, true);
    for (int i : face.alpha) strict[i] = false;

    for (int s = 0; s < starts; ++s) {
      ++result.stats.starts;
      Vector x;
      if (chart.cols() > 0) {
        Vector z(chart.cols());
        for (int i = 0; i < z.size(); ++i) z[i] = rng.gaussian();
        x = chart * z;
      } else {
        x = Vector::Zero(n);
      }
      Vector lam(m + l);
      for (int i = 0; i < m; ++i) lam[i] = std::abs(rng.gaussian());
      for (int i = m; i < m + l; ++i) lam[i] = rng.gaussian();

      // Newton on F(x, lam) = (grad g - Aa' lam_a - E' nu, Aa x, E x)
      bool converged = false;
      for (int it = 0; it < opts.newton_iters; ++it) {
        Vector F(N);
        Vector stat = g.gradient_at(x);
        if (m > 0) stat -= Aa.transpose() * lam.head(m);
        if (l > 0) stat -= C.E().transpose() * lam.tail(l);
        F.head(n) = stat;
        if (m > 0) F.segment(n, m) = Aa * x;
        if (l > 0) F.tail(l) = C.E() * x;
        const double fnorm = F.lpNorm<Eigen::Infinity>();
        const double scale = 1.0 + x.lpNorm<Eigen::Infinity>() + lam.lpNorm<Eigen::Infinity>();
        if (fnorm <= 1e-12 * scale) {
          converged = true;
          break;
        }
        const Matrix J = face_jacobian(g.hessian_at(x), Aa, C.E());
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(J);
        const Vector delta = cod.solve(-F);
        if (!delta.allFinite() || delta.norm() < 1e-15) break;
        // step with simple halving on residual growth
        double step = 1.0;
        for (int half = 0; half < 25; ++half) {
          Vector xn = x + step * delta.head(n);
          Vector ln = lam + step * delta.tail(m + l);
          Vector Fn(N);
          Vector statn = g.gradient_at(xn);
          if (m > 0) statn -= Aa.transpose() * ln.head(m);
          if (l > 0) statn -= C.E().transpose() * ln.tail(l);
          Fn.head(n) = statn;
          if (m > 0) Fn.segment(n, m) = Aa * xn;
          if (l > 0) Fn.tail(l) = C.E() * xn;
          if (Fn.lpNorm<Eigen::Infinity>() <= (1.0 - 1e-4 * step) * fnorm) {
            x = xn;
            lam = ln;
            break;
          }
          step *= 0.5;
          if (half == 24) it = opts.newton_iters;  // stalled
        }
      }
      if (!converged) continue;
      ++result.stats.converged;

      // multiplier sign and open-face membership
      bool ok = true;
      for (int i = 0; i < m; ++i)
        if (lam[i] < -opts.lambda_tol) ok = false;
      const double xs = std::max(1.0, x.norm());
      for (int i = 0; i < p && ok; ++i)
        if (strict[i] && C.A().row(i).dot(x) <= opts.face_tol * xs) ok = false;
      if (!ok) continue;
      const double nx = x.norm();
      if (nx <= 1e-8) continue;  // the origin is appended once below

      ++result.stats.raw_accepted;
      result.raw_points.push_back(x);

      KKTPoint pt;
      pt.x = x / nx;
      pt.lambda = lam.head(m) / int_pow(nx, d - 1);
      pt.alpha = face.alpha;
      pt.residual = kkt_residual(C, g, pt.x, pt.full_lambda(p));
      if (pt.residual > 1e-8) continue;
      const Matrix J = face_jacobian(g.hessian_at(pt.x), Aa, C.E());
      pt.min_jacobian_sv = smallest_sv(J);
      normalized.push_back(std::move(pt));
    }
  }

  // global dedupe on the normalized representatives
  std::sort(normalized.begin(), normalized.end(),
            [](const KKTPoint& a, const KKTPoint& b) { return lex_less_pt(a.x, b.x); });
  std::vector<KKTPoint> unique;
  for (KKTPoint& pt : normalized) {
    bool dup = false;
    for (const KKTPoint& q : unique)
      if ((q.x - pt.x).norm() <= opts.dedupe_radius) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(pt));
  }
  result.stats.deduped = static_cast<int>(unique.size());

  // the origin, on the all-active face
  {
    KKTPoint origin;
    origin.x = Vector::Zero(n);
    origin.lambda = Vector::Zero(p);
    origin.alpha.resize(p);
    for (int i = 0; i < p; ++i) origin.alpha[i] = i;
    origin.is_origin = true;
    origin.residual = kkt_residual(C, g, origin.x, Vector::Zero(p));
    if (origin.residual <= 1e-8) {
      const Matrix J = face_jacobian(g.hessian_at(origin.x), C.A(), C.E());
      origin.min_jacobian_sv = smallest_sv(J);
      result.points.push_back(std::move(origin));
    }
  }
  for (KKTPoint& pt : unique) result.points.push_back(std::move(pt));
  return result;
}

RankCheckResult jacobian_rank_check(int n, int d, const Vector& x) {
  if (x.size() != n) throw std::invalid_argument("point dimension mismatch");
  if (x.norm() == 0.0) throw std::invalid_argument("the rank statement excludes x = 0");
  const MonomialBasis basis = MonomialBasis::homogeneous(n, d);
  Matrix M(n, basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    const Exponents& e = basis.monomials()[j];
    for (int i = 0; i < n; ++i) {
      if (e[i] == 0) {
        M(i, j) = 0.0;
        continue;
      }
      double t = e[i];
      for (int q = 0; q < n; ++q) {
        const int pw = (q == i) ? e[q] - 1 : e[q];
        if (pw > 0) t *= int_pow(x[q], pw);
      }
      M(i, j) = t;
    }
  }
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * smax) ++rank;
  return {rank, s[s.size() - 1]};
}

FinitenessResult finiteness_probe(const PolyhedralCone& C, const HomogeneousForm& h,
                                  const KktEnumOptions& opts, double isolation_tol) {
  const KktEnumResult first = enumerate_kkt(C, h, opts);
  KktEnumOptions doubled = opts;
  doubled.starts_factor = 2 * opts.starts_factor;
  doubled.seed = opts.seed + 1;
  const KktEnumResult second = enumerate_kkt(C, h, doubled);

  bool isolated = true;
  double min_sv = std::numeric_limits<double>::infinity();
  for (const KKTPoint& pt : first.points) {
    min_sv = std::min(min_sv, pt.min_jacobian_sv);
    if (pt.min_jacobian_sv <= isolation_tol) isolated = false;
  }
  if (first.points.empty()) min_sv = 0.0;

  bool new_points = false;
  for (const KKTPoint& q : second.points) {
    if (q.is_origin) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const KKTPoint& pt : first.points)
      if (!pt.is_origin) best = std::min(best, (pt.x - q.x).norm());
    if (best > 1e-5) new_points = true;
  }

  return {isolated && !new_points, static_cast<int>(first.points.size()), min_sv};
}

GenericityResult genericity_mc(const Polyhedron& K, int d, int trials, std::uint64_t seed,
                               const KktEnumOptions& opts) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const PolyhedralCone cone = recession_cone(K);
  const int n = K.dim();
  GenericityResult out;
  out.trials.reserve(trials);
  Rng root(seed);
  int regular = 0, finite = 0;
  MinOnSphereOptions sphere;
  sphere.num_samples = 24;
  for (int t = 0; t < trials; ++t) {
    Rng trial_rng = root.fork(t);
    const Polynomial f = random_polynomial(n, d, trial_rng);
    sphere.seed = seed ^ (0xabcd0000u + static_cast<std::uint64_t>(t));
    const AsymptoticProblem ap = make_asymptotic_problem(cone, f, d);
    const RegularityVerdict verdict = classify(ap, 1e-6, sphere);
    const bool is_regular = verdict.status == RegStatus::kRegularCoercive ||
                            verdict.status == RegStatus::kRegularUnboundedBelow;
    KktEnumOptions kopts = opts;
    kopts.seed = seed ^ (0x51000000u + static_cast<std::uint64_t>(t));
    const HomogeneousForm form = HomogeneousForm::from_polynomial(ap.leading_form, d);
    const FinitenessResult fin = finiteness_probe(cone, form, kopts);
    if (is_regular) ++regular;
    if (fin.finite) ++finite;
    out.trials.push_back({t, is_regular, fin.finite, verdict.mu});
  }
  out.regular_fraction = static_cast<double>(regular) / trials;
  out.finite_kkt_fraction = static_cast<double>(finite) / trials;
  return out;
}

}  // namespace asymptopt
