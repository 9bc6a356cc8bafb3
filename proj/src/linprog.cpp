#include "asymptopt/linprog.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asymptopt {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-9;
constexpr int kMaxPivots = 20000;

// Tableau simplex on min c'z, G z = h, z >= 0, h >= 0. Bland's rule
// throughout, so no cycling.
struct Tableau {
  Eigen::MatrixXd body;  // m x (ncols + 1), last column = rhs
  std::vector<int> basis;

  int rows() const { return static_cast<int>(body.rows()); }
  int cols() const { return static_cast<int>(body.cols()) - 1; }

  void pivot(int r, int j) {
    body.row(r) /= body(r, j);
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = body(i, j);
      if (f != 0.0) body.row(i) -= f * body.row(r);
    }
    basis[r] = j;
  }

  // Returns kOptimal or kUnbounded for the objective c over active columns.
  LpStatus run(const Eigen::VectorXd& c, int active_cols) {
    for (int it = 0; it < kMaxPivots; ++it) {
      // reduced costs: d_j = c_j - c_B' B^{-1} A_j
      int enter = -1;
      for (int j = 0; j < active_cols; ++j) {
        double d = c[j];
        for (int i = 0; i < rows(); ++i) d -= c[basis[i]] * body(i, j);
        if (d < -kReducedCostTol) {
          enter = j;
          break;  // Bland: first improving index
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        if (body(i, enter) > kPivotTol) {
          const double ratio = body(i, cols()) / body(i, enter);
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex pivot cap exceeded");
  }
};

}  // namespace

LinearProgram::LinearProgram(int num_vars)
    : num_vars_(num_vars), c_(Eigen::VectorXd::Zero(num_vars)), nonneg_(num_vars, false) {
  if (num_vars < 1) throw std::invalid_argument("LP needs at least one variable");
}

void LinearProgram::set_objective(const Eigen::VectorXd& c) {
  if (c.size() != num_vars_) throw std::invalid_argument("objective length mismatch");
  c_ = c;
}

void LinearProgram::mark_nonnegative(int var) { nonneg_.at(var) = true; }

void LinearProgram::add_row(const Eigen::VectorXd& a, RowSense sense, double rhs) {
  if (a.size() != num_vars_) throw std::invalid_argument("row length mismatch");
  rows_.push_back(a);
  senses_.push_back(sense);
  rhs_.push_back(rhs);
}

void LinearProgram::add_bounds(int var, double lo, double hi) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(num_vars_);
  a[var] = 1.0;
  add_row(a, RowSense::kGe, lo);
  add_row(a, RowSense::kLe, hi);
}

LpResult LinearProgram::solve() const {
  const int m = static_cast<int>(rows_.size());
  // Column layout: split/plain user variables, then slacks, then artificials.
  // free x_i -> x_i^+ - x_i^-
  std::vector<int> pos_col(num_vars_), neg_col(num_vars_, -1);
  int ncols = 0;
  for (int i = 0; i < num_vars_; ++i) {
    pos_col[i] = ncols++;
    if (!nonneg_[i]) neg_col[i] = ncols++;
  }
  const int slack_base = ncols;
  int num_slacks = 0;
  for (int r = 0; r < m; ++r)
    if (senses_[r] != RowSense::kEq) ++num_slacks;
  ncols += num_slacks;
  const int art_base = ncols;
  ncols += m;

  Tableau t;
  t.body = Eigen::MatrixXd::Zero(m, ncols + 1);
  t.basis.assign(m, -1);

  int slack = 0;
  for (int r = 0; r < m; ++r) {
    double sign = 1.0;
    double rhs = rhs_[r];
    Eigen::VectorXd a = rows_[r];
    double slack_coef = 0.0;
    if (senses_[r] == RowSense::kGe) slack_coef = -1.0;
    if (senses_[r] == RowSense::kLe) slack_coef = 1.0;
    if (rhs < 0) {  // flip so the rhs column is nonnegative
      sign = -1.0;
      rhs = -rhs;
      a = -a;
      slack_coef = -slack_coef;
    }
    for (int i = 0; i < num_vars_; ++i) {
      t.body(r, pos_col[i]) = a[i];
      if (neg_col[i] >= 0) t.body(r, neg_col[i]) = -a[i];
    }
    if (senses_[r] != RowSense::kEq) {
      t.body(r, slack_base + slack) = slack_coef;
      ++slack;
    }
    t.body(r, art_base + r) = 1.0;
    t.body(r, ncols) = rhs;
    t.basis[r] = art_base + r;
    (void)sign;
  }

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncols);
  for (int r = 0; r < m; ++r) phase1[art_base + r] = 1.0;
  t.run(phase1, ncols);
  double infeas = 0.0;
  for (int r = 0; r < m; ++r)
    if (t.basis[r] >= art_base) infeas += t.body(r, ncols);
  if (infeas > 1e-7) return {LpStatus::kInfeasible, Eigen::VectorXd::Zero(num_vars_), 0.0};

  // Pivot lingering zero-level artificials out of the basis; a row with no
  // eligible pivot is redundant and can stay (its rhs is ~0).
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] < art_base) continue;
    for (int j = 0; j < art_base; ++j) {
      if (std::abs(t.body(r, j)) > 1e-8) {
        t.pivot(r, j);
        break;
      }
    }
  }

  // Phase 2: original costs, artificial columns frozen out.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < num_vars_; ++i) {
    phase2[pos_col[i]] = c_[i];
    if (neg_col[i] >= 0) phase2[neg_col[i]] = -c_[i];
  }
  LpStatus st = t.run(phase2, art_base);
  if (st == LpStatus::kUnbounded)
    return {LpStatus::kUnbounded, Eigen::VectorXd::Zero(num_vars_), 0.0};

  Eigen::VectorXd z = Eigen::VectorXd::Zero(ncols);
  for (int r = 0; r < m; ++r)
    if (t.basis[r] < ncols) z[t.basis[r]] = t.body(r, ncols);
  Eigen::VectorXd x(num_vars_);
  for (int i = 0; i < num_vars_; ++i)
    x[i] = z[pos_col[i]] - (neg_col[i] >= 0 ? z[neg_col[i]] : 0.0);
  return {LpStatus::kOptimal, x, c_.dot(x)};
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                     int max_iter) {
  const int n = static_cast<int>(A.cols());
  if (max_iter <= 0) max_iter = 3 * n + 30;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = A.transpose() * (b - A * x);

  auto solve_passive = [&](const std::vector<bool>& cols) {
    int k = 0;
    for (bool c : cols) k += c;
    Eigen::MatrixXd Ap(A.rows(), k);
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (cols[j]) {
        Ap.col(idx.size()) = A.col(j);
        idx.push_back(j);
      }
    Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (size_t i = 0; i < idx.size(); ++i) z[idx[i]] = zp[i];
    return z;
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      Eigen::VectorXd z = solve_passive(passive);
      bool ok = true;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0) ok = false;
      if (ok) {
        x = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (int j = 0; j < n; ++j)
        if (passive[j] && x[j] < 1e-14) passive[j] = false;
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

}  // namespace asymptopt
