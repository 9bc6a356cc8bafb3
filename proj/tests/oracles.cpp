#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace asymptopt::oracles {

namespace {

struct FlatPoly {
  std::vector<std::vector<int>> exps;
  std::vector<double> coeffs;
  int n;

  explicit FlatPoly(const Polynomial& p) : n(p.n()) {
    for (const auto& [e, c] : p.terms()) {
      exps.push_back(e);
      coeffs.push_back(c);
    }
  }

  double eval(const double* x) const {
    double sum = 0.0;
    for (size_t t = 0; t < coeffs.size(); ++t) {
      double v = coeffs[t];
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < exps[t][i]; ++q) v *= x[i];
      sum += v;
    }
    return sum;
  }
};

struct Chart {
  Matrix N;            // n x k orthonormal
  Matrix A_unit;       // inequality rows, unit-normalized
  int k;
};

Chart make_chart(const PolyhedralCone& C) {
  Chart ch;
  const int n = C.dim();
  if (C.E().rows() == 0) {
    ch.N = Matrix::Identity(n, n);
  } else {
    Eigen::JacobiSVD<Matrix> svd(C.E(), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > 1e-11 * std::max(1.0, smax)) ++rank;
    ch.N = svd.matrixV().rightCols(n - rank);
  }
  ch.k = static_cast<int>(ch.N.cols());
  ch.A_unit.resize(C.A().rows(), n);
  for (int r = 0; r < C.A().rows(); ++r) {
    const double nr = C.A().row(r).norm();
    ch.A_unit.row(r) = nr > 0 ? C.A().row(r) / nr : C.A().row(r);
  }
  return ch;
}

bool feasible(const Chart& ch, const Vector& v, double tol) {
  for (int r = 0; r < ch.A_unit.rows(); ++r)
    if (ch.A_unit.row(r).dot(v) < -tol) return false;
  return true;
}

void consider(const Chart& ch, const FlatPoly& fp, const Vector& z, double tol,
              GridMin& best) {
  const Vector v = ch.N * z;
  if (!feasible(ch, v, tol)) return;
  const double val = fp.eval(v.data());
  if (!best.found || val < best.mu) {
    best.mu = val;
    best.argmin = v;
    best.found = true;
  }
}

}  // namespace

GridMin grid_min_on_cone_sphere(const PolyhedralCone& C, const Polynomial& h,
                                double resolution, int zoom_rounds) {
  const Chart ch = make_chart(C);
  const FlatPoly fp(h);
  GridMin best{std::numeric_limits<double>::infinity(), Vector(), false};
  const double tol = std::max(1e-9, resolution);

  if (ch.k == 0) return best;
  if (ch.k == 1) {
    for (double s : {1.0, -1.0}) consider(ch, fp, Vector::Constant(1, s), 1e-9, best);
    return best;
  }

  if (ch.k == 2) {
    const int steps = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI / resolution)));
    auto scan = [&](double lo, double hi, int count, double ftol) {
      for (int i = 0; i < count; ++i) {
        const double th = lo + (hi - lo) * i / count;
        Vector z(2);
        z << std::cos(th), std::sin(th);
        consider(ch, fp, z, ftol, best);
      }
    };
    scan(0.0, 2.0 * M_PI, steps, tol);
    double span = 2.0 * M_PI / steps;
    for (int round = 0; round < zoom_rounds && best.found; ++round) {
      const Vector zb = ch.N.transpose() * best.argmin;
      const double th0 = std::atan2(zb[1], zb[0]);
      scan(th0 - span, th0 + span, 81, std::max(1e-9, span / 10.0));
      span /= 10.0;
    }
    return best;
  }

  // k == 3: polar/azimuthal grid with local zoom
  const int pol = std::max(8, static_cast<int>(std::ceil(M_PI / resolution)));
  const int azi = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI / resolution)));
  auto scan = [&](double t_lo, double t_hi, int t_n, double p_lo, double p_hi, int p_n,
                  double ftol) {
    for (int i = 0; i <= t_n; ++i) {
      const double th = t_lo + (t_hi - t_lo) * i / t_n;
      const double st = std::sin(th), ct = std::cos(th);
      for (int j = 0; j < p_n; ++j) {
        const double ph = p_lo + (p_hi - p_lo) * j / p_n;
        Vector z(3);
        z << st * std::cos(ph), st * std::sin(ph), ct;
        consider(ch, fp, z, ftol, best);
      }
    }
  };
  scan(0.0, M_PI, pol, 0.0, 2.0 * M_PI, azi, tol);
  double span = M_PI / pol;
  for (int round = 0; round < zoom_rounds && best.found; ++round) {
    const Vector zb = ch.N.transpose() * best.argmin;
    const double th0 = std::acos(std::clamp(zb[2], -1.0, 1.0));
    const double ph0 = std::atan2(zb[1], zb[0]);
    scan(th0 - span, th0 + span, 40, ph0 - span, ph0 + span, 40,
         std::max(1e-9, span / 10.0));
    span /= 10.0;
  }
  return best;
}

GridMin grid_min_on_box(const Polyhedron& K, const Polynomial& f, double radius,
                        int per_axis) {
  const int n = K.dim();
  const FlatPoly fp(f);
  GridMin best{std::numeric_limits<double>::infinity(), Vector(), false};
  std::vector<int> idx(n, 0);
  Vector x(n);
  const double step = 2.0 * radius / (per_axis - 1);
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = -radius + idx[i] * step;
    if (K.contains(x, 1e-9)) {
      const double val = fp.eval(x.data());
      if (!best.found || val < best.mu) {
        best.mu = val;
        best.argmin = x;
        best.found = true;
      }
    }
    int carry = 0;
    while (carry < n && ++idx[carry] >= per_axis) idx[carry++] = 0;
    if (carry == n) break;
  }
  return best;
}

}  // namespace asymptopt::oracles
