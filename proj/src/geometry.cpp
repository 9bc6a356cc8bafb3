#include "asymptopt/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asymptopt/linprog.hpp"
#include "asymptopt/rng.hpp"

namespace asymptopt {

namespace {

Vector rounded(const Vector& v, double grid = 1e-9) {
  Vector r(v.size());
  for (int i = 0; i < v.size(); ++i) r[i] = std::round(v[i] / grid) * grid;
  return r;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

void sort_rays(std::vector<Vector>& rays) {
  std::sort(rays.begin(), rays.end(),
            [](const Vector& a, const Vector& b) { return lex_less(rounded(a), rounded(b)); });
}

// Orthogonal projection of v onto the complement of span(basis);
// basis vectors are orthonormal.
Vector project_out(const Vector& v, const std::vector<Vector>& basis) {
  Vector r = v;
  for (const Vector& u : basis) r -= u.dot(r) * u;
  return r;
}

}  // namespace

Polyhedron::Polyhedron(Matrix A, Vector b, Matrix E, Vector c)
    : A_(std::move(A)), b_(std::move(b)), E_(std::move(E)), c_(std::move(c)) {
  if (A_.rows() != b_.size()) throw std::invalid_argument("A rows and b length differ");
  if (E_.rows() != c_.size()) throw std::invalid_argument("E rows and c length differ");
  n_ = static_cast<int>(std::max(A_.cols(), E_.cols()));
  if (n_ < 1)
    throw std::invalid_argument("polyhedron needs a declared dimension: use free_space(n)");
  if (A_.cols() != n_) {
    if (A_.rows() > 0) throw std::invalid_argument("A column count mismatch");
    A_.resize(0, n_);
  }
  if (E_.cols() != n_) {
    if (E_.rows() > 0) throw std::invalid_argument("E column count mismatch");
    E_.resize(0, n_);
  }
}

Polyhedron Polyhedron::from_inequalities(Matrix A, Vector b) {
  const int n = static_cast<int>(A.cols());
  return Polyhedron(std::move(A), std::move(b), Matrix(0, n), Vector(0));
}

Polyhedron Polyhedron::free_space(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  return Polyhedron(Matrix(0, n), Vector(0), Matrix(0, n), Vector(0));
}

Polyhedron Polyhedron::box(const Vector& lo, const Vector& hi) {
  const int n = static_cast<int>(lo.size());
  Matrix A(2 * n, n);
  Vector b(2 * n);
  A.setZero();
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1.0;
    b[2 * i] = lo[i];
    A(2 * i + 1, i) = -1.0;
    b[2 * i + 1] = -hi[i];
  }
  return from_inequalities(std::move(A), std::move(b));
}

bool Polyhedron::contains(const Vector& x, double tol) const {
  return max_violation(x) <= tol;
}

double Polyhedron::max_violation(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("point dimension mismatch");
  double v = 0.0;
  if (A_.rows() > 0) v = std::max(v, (b_ - A_ * x).maxCoeff());
  if (E_.rows() > 0) v = std::max(v, (E_ * x - c_).cwiseAbs().maxCoeff());
  return v;
}

bool Polyhedron::is_empty() const {
  if (!feasible_cache_) {
    LinearProgram lp(n_);
    // phase-1 style probe with the simplex's own artificials doing the work:
    // any x works as objective 0; infeasibility is detected by the solver.
    for (int r = 0; r < A_.rows(); ++r) lp.add_row(A_.row(r), RowSense::kGe, b_[r]);
    for (int r = 0; r < E_.rows(); ++r) lp.add_row(E_.row(r), RowSense::kEq, c_[r]);
    LpResult res = lp.solve();
    if (res.status == LpStatus::kInfeasible)
      feasible_cache_ = std::optional<Vector>();
    else
      feasible_cache_ = std::optional<Vector>(res.x);
  }
  return !feasible_cache_->has_value();
}

Vector Polyhedron::feasible_point() const {
  if (is_empty()) throw std::invalid_argument("empty polyhedron");
  return **feasible_cache_;
}

Polyhedron Polyhedron::intersect_box(double radius) const {
  Matrix A(A_.rows() + 2 * n_, n_);
  Vector b(A_.rows() + 2 * n_);
  A.setZero();
  if (A_.rows() > 0) {
    A.topRows(A_.rows()) = A_;
    b.head(A_.rows()) = b_;
  }
  for (int i = 0; i < n_; ++i) {
    A(A_.rows() + 2 * i, i) = 1.0;
    b[A_.rows() + 2 * i] = -radius;
    A(A_.rows() + 2 * i + 1, i) = -1.0;
    b[A_.rows() + 2 * i + 1] = -radius;
  }
  return Polyhedron(std::move(A), std::move(b), E_, c_);
}

PolyhedralCone::PolyhedralCone(Matrix A, Matrix E) : A_(std::move(A)), E_(std::move(E)) {
  n_ = static_cast<int>(std::max(A_.cols(), E_.cols()));
  if (n_ < 1)
    throw std::invalid_argument("cone needs a declared dimension: use free_space(n)");
  if (A_.cols() != n_) {
    if (A_.rows() > 0) throw std::invalid_argument("A column count mismatch");
    A_.resize(0, n_);
  }
  if (E_.cols() != n_) {
    if (E_.rows() > 0) throw std::invalid_argument("E column count mismatch");
    E_.resize(0, n_);
  }
}

PolyhedralCone PolyhedralCone::from_inequalities(Matrix A) {
  const int n = static_cast<int>(A.cols());
  return PolyhedralCone(std::move(A), Matrix(0, n));
}

PolyhedralCone PolyhedralCone::orthant(int n) {
  return from_inequalities(Matrix::Identity(n, n));
}

PolyhedralCone PolyhedralCone::free_space(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  return PolyhedralCone(Matrix(0, n), Matrix(0, n));
}

bool PolyhedralCone::contains(const Vector& x, double tol) const {
  return max_violation(x) <= tol;
}

double PolyhedralCone::max_violation(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("point dimension mismatch");
  double v = 0.0;
  if (A_.rows() > 0) v = std::max(v, (-(A_ * x)).maxCoeff());
  if (E_.rows() > 0) v = std::max(v, (E_ * x).cwiseAbs().maxCoeff());
  return v;
}

Polyhedron PolyhedralCone::as_polyhedron() const {
  return Polyhedron(A_, Vector::Zero(A_.rows()), E_, Vector::Zero(E_.rows()));
}

bool PolyhedralCone::is_zero_cone(double tol) const {
  if (!zero_cache_) {
    bool zero = true;
    for (int i = 0; i < n_ && zero; ++i) {
      for (double sign : {1.0, -1.0}) {
        LinearProgram lp(n_);
        Vector c = Vector::Zero(n_);
        c[i] = -sign;  // maximize sign * x_i
        lp.set_objective(c);
        for (int r = 0; r < A_.rows(); ++r) lp.add_row(A_.row(r), RowSense::kGe, 0.0);
        for (int r = 0; r < E_.rows(); ++r) lp.add_row(E_.row(r), RowSense::kEq, 0.0);
        for (int j = 0; j < n_; ++j) lp.add_bounds(j, -1.0, 1.0);
        LpResult res = lp.solve();
        if (res.status == LpStatus::kOptimal && -res.objective > tol) {
          zero = false;
          break;
        }
      }
    }
    zero_cache_ = zero;
  }
  return *zero_cache_;
}

std::vector<Vector> RayBasis::generators() const {
  std::vector<Vector> g = rays;
  for (const Vector& l : lineality) {
    g.push_back(l);
    g.push_back(-l);
  }
  return g;
}

PolyhedralCone recession_cone(const Polyhedron& P) {
  if (P.is_empty()) throw std::invalid_argument("empty polyhedron has no recession cone here");
  Matrix E = P.E();
  if (P.A().rows() == 0 && E.rows() == 0) return PolyhedralCone::free_space(P.dim());
  return PolyhedralCone(P.A(), std::move(E));
}

bool is_bounded(const Polyhedron& P, double tol) {
  return recession_cone(P).is_zero_cone(tol);
}

namespace {

struct DdState {
  std::vector<Vector> rays;
  std::vector<Vector> lineality;              // orthonormal
  std::vector<std::vector<bool>> active;      // per ray, per processed halfspace
  std::vector<Vector> processed;              // unit halfspace normals
};

void dedupe_rays(DdState& s) {
  std::vector<Vector> out;
  std::vector<std::vector<bool>> act;
  for (size_t i = 0; i < s.rays.size(); ++i) {
    bool dup = false;
    for (const Vector& r : out)
      if ((r - s.rays[i]).norm() < 1e-7) {
        dup = true;
        break;
      }
    if (!dup) {
      out.push_back(s.rays[i]);
      act.push_back(s.active[i]);
    }
  }
  s.rays = std::move(out);
  s.active = std::move(act);
}

// r1, r2 adjacent iff no third ray's active set contains their common one.
bool adjacent(const DdState& s, size_t i, size_t j) {
  const size_t m = s.processed.size();
  for (size_t k = 0; k < s.rays.size(); ++k) {
    if (k == i || k == j) continue;
    bool contains_all = true;
    for (size_t c = 0; c < m; ++c)
      if (s.active[i][c] && s.active[j][c] && !s.active[k][c]) {
        contains_all = false;
        break;
      }
    if (contains_all) return false;
  }
  return true;
}

void add_halfspace(DdState& s, const Vector& a_unit) {
  constexpr double kEps = 1e-9;

  // If the halfspace cuts the lineality space, one lineality direction
  // becomes a ray and everything else is reduced to its kernel.
  int cut = -1;
  double best = kEps;
  for (size_t j = 0; j < s.lineality.size(); ++j) {
    const double v = std::abs(a_unit.dot(s.lineality[j]));
    if (v > best) {
      best = v;
      cut = static_cast<int>(j);
    }
  }
  if (cut >= 0) {
    Vector l0 = s.lineality[cut];
    if (a_unit.dot(l0) < 0) l0 = -l0;
    const double al0 = a_unit.dot(l0);
    std::vector<Vector> new_lin;
    for (size_t j = 0; j < s.lineality.size(); ++j) {
      if (static_cast<int>(j) == cut) continue;
      Vector l = s.lineality[j] - (a_unit.dot(s.lineality[j]) / al0) * l0;
      if (l.norm() > 1e-12) new_lin.push_back(l / l.norm());
    }
    // re-orthonormalize
    std::vector<Vector> ortho;
    for (Vector l : new_lin) {
      l = project_out(l, ortho);
      if (l.norm() > 1e-10) ortho.push_back(l / l.norm());
    }
    s.lineality = ortho;

    std::vector<Vector> new_rays;
    std::vector<std::vector<bool>> new_active;
    for (size_t i = 0; i < s.rays.size(); ++i) {
      Vector r = s.rays[i] - (a_unit.dot(s.rays[i]) / al0) * l0;
      r = project_out(r, s.lineality);
      if (r.norm() > 1e-10) {
        new_rays.push_back(r / r.norm());
        auto act = s.active[i];
        act.push_back(true);  // a'r = 0 for the reduced rays
        new_active.push_back(std::move(act));
      }
    }
    Vector r0 = project_out(l0, s.lineality);
    new_rays.push_back(r0 / r0.norm());
    std::vector<bool> act0(s.processed.size(), true);  // l0 was lineality: active on all
    act0.push_back(false);                             // strictly inside the new halfspace
    new_active.push_back(std::move(act0));

    s.rays = std::move(new_rays);
    s.active = std::move(new_active);
    s.processed.push_back(a_unit);
    dedupe_rays(s);
    return;
  }

  // Standard double-description step on the pointed part.
  std::vector<size_t> plus, zero, minus;
  std::vector<double> val(s.rays.size());
  for (size_t i = 0; i < s.rays.size(); ++i) {
    val[i] = a_unit.dot(s.rays[i]);
    if (val[i] > kEps)
      plus.push_back(i);
    else if (val[i] < -kEps)
      minus.push_back(i);
    else
      zero.push_back(i);
  }
  if (minus.empty()) {  // nothing cut; just record activity
    for (size_t i = 0; i < s.rays.size(); ++i)
      s.active[i].push_back(std::abs(val[i]) <= kEps);
    s.processed.push_back(a_unit);
    return;
  }

  std::vector<Vector> new_rays;
  std::vector<std::vector<bool>> new_active;
  for (size_t i : plus) {
    auto act = s.active[i];
    act.push_back(false);
    new_rays.push_back(s.rays[i]);
    new_active.push_back(std::move(act));
  }
  for (size_t i : zero) {
    auto act = s.active[i];
    act.push_back(true);
    new_rays.push_back(s.rays[i]);
    new_active.push_back(std::move(act));
  }
  for (size_t i : plus) {
    for (size_t j : minus) {
      if (!adjacent(s, i, j)) continue;
      Vector w = val[i] * s.rays[j] - val[j] * s.rays[i];
      if (w.norm() < 1e-12) continue;
      w /= w.norm();
      std::vector<bool> act(s.processed.size() + 1);
      for (size_t c = 0; c < s.processed.size(); ++c)
        act[c] = std::abs(s.processed[c].dot(w)) <= 1e-8;
      act[s.processed.size()] = true;
      new_rays.push_back(w);
      new_active.push_back(std::move(act));
    }
  }
  s.rays = std::move(new_rays);
  s.active = std::move(new_active);
  s.processed.push_back(a_unit);
  dedupe_rays(s);
}

// Drop rays expressible as nonnegative combinations of the others plus the
// lineality space (L1-residual LP).
void minimality_pass(DdState& s) {
  if (s.rays.size() < 2) return;
  const int n = static_cast<int>(s.rays[0].size());
  for (size_t k = 0; k < s.rays.size();) {
    const int nr = static_cast<int>(s.rays.size()) - 1;
    const int nl = static_cast<int>(s.lineality.size());
    // vars: w (nr, >=0), u (nl, free), e+ (n, >=0), e- (n, >=0)
    LinearProgram lp(nr + nl + 2 * n);
    Vector obj = Vector::Zero(nr + nl + 2 * n);
    for (int i = 0; i < 2 * n; ++i) obj[nr + nl + i] = 1.0;
    lp.set_objective(obj);
    for (int i = 0; i < nr; ++i) lp.mark_nonnegative(i);
    for (int i = 0; i < 2 * n; ++i) lp.mark_nonnegative(nr + nl + i);
    for (int row = 0; row < n; ++row) {
      Vector a = Vector::Zero(nr + nl + 2 * n);
      int col = 0;
      for (size_t i = 0; i < s.rays.size(); ++i)
        if (i != k) a[col++] = s.rays[i][row];
      for (int j = 0; j < nl; ++j) a[col++] = s.lineality[j][row];
      a[nr + nl + row] = 1.0;
      a[nr + nl + n + row] = -1.0;
      lp.add_row(a, RowSense::kEq, s.rays[k][row]);
    }
    LpResult res = lp.solve();
    if (res.status == LpStatus::kOptimal && res.objective < 1e-9) {
      s.rays.erase(s.rays.begin() + k);
      s.active.erase(s.active.begin() + k);
    } else {
      ++k;
    }
  }
}

}  // namespace

RayBasis extreme_rays(const PolyhedralCone& C, const Caps& caps) {
  const int n = C.dim();
  if (n > caps.max_dim)
    throw CapExceeded("ray enumeration dimension cap exceeded");
  // count real (nonzero) inequality rows
  int p = 0;
  for (int r = 0; r < C.A().rows(); ++r)
    if (C.A().row(r).norm() > 0) ++p;
  if (p > caps.max_rows) throw CapExceeded("ray enumeration row cap exceeded");

  DdState s;
  for (int i = 0; i < n; ++i) s.lineality.push_back(Vector::Unit(n, i));

  std::vector<Vector> halfspaces;
  for (int r = 0; r < C.A().rows(); ++r) {
    Vector a = C.A().row(r);
    if (a.norm() > 0) halfspaces.push_back(a / a.norm());
  }
  for (int r = 0; r < C.E().rows(); ++r) {
    Vector e = C.E().row(r);
    if (e.norm() > 0) {
      halfspaces.push_back(e / e.norm());
      halfspaces.push_back(-e / e.norm());
    }
  }
  for (const Vector& a : halfspaces) add_halfspace(s, a);
  minimality_pass(s);

  RayBasis out;
  out.rays = s.rays;
  out.lineality = s.lineality;
  // deterministic presentation
  for (Vector& l : out.lineality) {
    Vector r = rounded(l);
    for (int i = 0; i < r.size(); ++i) {
      if (r[i] > 0) break;
      if (r[i] < 0) {
        l = -l;
        break;
      }
    }
  }
  sort_rays(out.rays);
  sort_rays(out.lineality);
  return out;
}

Vector project(const Polyhedron& P, const Vector& z, double tol, int max_iter) {
  if (z.size() != P.dim()) throw std::invalid_argument("point dimension mismatch");
  if (P.is_empty()) throw std::invalid_argument("cannot project onto an empty polyhedron");
  if (P.contains(z, 1e-12)) return z;

  const Matrix& A = P.A();
  const Vector& b = P.b();
  const Matrix& E = P.E();
  const int m = static_cast<int>(A.rows());
  const int l = static_cast<int>(E.rows());
  const int n = P.dim();
  if (max_iter <= 0) max_iter = 80 * (m + l + 2);

  Vector x = P.feasible_point();
  std::vector<bool> active(m, false);
  for (int i = 0; i < m; ++i)
    if (A.row(i).dot(x) - b[i] <= 1e-10 * (1.0 + std::abs(b[i]))) active[i] = true;

  const double sv_tol = 1e-11;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (active[i]) idx.push_back(i);
    Matrix M(l + idx.size(), n);
    for (int j = 0; j < l; ++j) M.row(j) = E.row(j);
    for (size_t j = 0; j < idx.size(); ++j) M.row(l + j) = A.row(idx[j]);

    const Vector d = z - x;
    Vector p = d;
    Eigen::JacobiSVD<Matrix> svd;
    if (M.rows() > 0) {
      svd.compute(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
      // remove the row-space component of d
      const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
      for (int k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()[k] > sv_tol * std::max(1.0, smax)) {
          const Vector vk = svd.matrixV().col(k);
          p -= vk.dot(p) * vk;
        }
      }
    }

    if (p.norm() <= tol * (1.0 + z.norm())) {
      if (M.rows() == 0) return x;
      // multipliers for x - z = M' mu; inequality rows need mu >= 0
      Eigen::JacobiSVD<Matrix> svdT(M.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Vector mu = svdT.solve(x - z);
      int worst = -1;
      double worst_mu = -1e-10;
      for (size_t j = 0; j < idx.size(); ++j) {
        if (mu[l + j] < worst_mu) {
          worst_mu = mu[l + j];
          worst = idx[j];
        }
      }
      if (worst < 0) return x;
      active[worst] = false;
      continue;
    }

    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < m; ++i) {
      if (active[i]) continue;
      const double dir = A.row(i).dot(p);
      if (dir < -1e-13) {
        const double ai = (b[i] - A.row(i).dot(x)) / dir;
        if (ai < alpha) {
          alpha = ai;
          blocker = i;
        }
      }
    }
    x += alpha * p;
    if (blocker >= 0) active[blocker] = true;
  }
  throw std::runtime_error("projection active-set iteration cap exceeded");
}

Vector project_cone(const PolyhedralCone& C, const Vector& x) {
  return project(C.as_polyhedron(), x);
}

std::vector<Vector> sample_cone_sphere(const PolyhedralCone& C, int count,
                                       std::uint64_t seed, const Caps& caps) {
  if (C.is_zero_cone())
    throw std::invalid_argument("zero cone: the unit sphere slice is empty");
  const RayBasis rb = extreme_rays(C, caps);
  const std::vector<Vector> gens = rb.generators();
  const int k = static_cast<int>(gens.size());
  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const std::vector<double> w = rng.simplex_weights(k);
    Vector u = Vector::Zero(C.dim());
    for (int i = 0; i < k; ++i) u += w[i] * gens[i];
    const double nu = u.norm();
    if (nu < 1e-9) continue;  // opposite lineality weights cancelled
    out.push_back(u / nu);
  }
  return out;
}

std::vector<PseudoFace> pseudo_faces(const PolyhedralCone& C, const Caps& caps) {
  const int p = static_cast<int>(C.A().rows());
  if (p > caps.max_rows) throw CapExceeded("pseudo-face row cap exceeded");
  const int n = C.dim();
  std::vector<PseudoFace> faces;
  faces.reserve(std::size_t{1} << p);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
    PseudoFace face;
    for (int i = 0; i < p; ++i)
      if (mask & (std::uint64_t{1} << i)) face.alpha.push_back(i);
    // LP: max t s.t. A_alpha x = 0, E x = 0, A_i x >= t (i not in alpha),
    //     |x| <= 1, 0 <= t <= 1. Nonempty iff optimal t is strictly positive,
    //     or there is no strict row at all (then x = 0 witnesses membership).
    const bool has_strict = face.alpha.size() < static_cast<size_t>(p);
    if (!has_strict) {
      face.nonempty = true;  // x = 0 always satisfies the all-equality system
      faces.push_back(std::move(face));
      continue;
    }
    LinearProgram lp(n + 1);
    Vector obj = Vector::Zero(n + 1);
    obj[n] = -1.0;  // maximize t
    lp.set_objective(obj);
    std::vector<bool> in_alpha(p, false);
    for (int i : face.alpha) in_alpha[i] = true;
    for (int i = 0; i < p; ++i) {
      Vector row = Vector::Zero(n + 1);
      row.head(n) = C.A().row(i);
      if (in_alpha[i]) {
        lp.add_row(row, RowSense::kEq, 0.0);
      } else {
        row[n] = -1.0;
        lp.add_row(row, RowSense::kGe, 0.0);
      }
    }
    for (int r = 0; r < C.E().rows(); ++r) {
      Vector row = Vector::Zero(n + 1);
      row.head(n) = C.E().row(r);
      lp.add_row(row, RowSense::kEq, 0.0);
    }
    for (int j = 0; j < n; ++j) lp.add_bounds(j, -1.0, 1.0);
    lp.add_bounds(n, 0.0, 1.0);
    LpResult res = lp.solve();
    face.nonempty = res.status == LpStatus::kOptimal && -res.objective > 1e-7;
    faces.push_back(std::move(face));
  }
  return faces;
}

bool in_pseudo_face(const PolyhedralCone& C, const std::vector<int>& alpha,
                    const Vector& x, double tol) {
  std::vector<bool> in_alpha(C.A().rows(), false);
  for (int i : alpha) in_alpha.at(i) = true;
  for (int i = 0; i < C.A().rows(); ++i) {
    const double v = C.A().row(i).dot(x);
    if (in_alpha[i] && std::abs(v) > tol) return false;
    if (!in_alpha[i] && v <= tol) return false;
  }
  for (int r = 0; r < C.E().rows(); ++r)
    if (std::abs(C.E().row(r).dot(x)) > tol) return false;
  return true;
}

}  // namespace asymptopt
