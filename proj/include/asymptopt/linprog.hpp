#ifndef ASYMPTOPT_LINPROG_HPP
#define ASYMPTOPT_LINPROG_HPP

#include <Eigen/Core>
#include <vector>

namespace asymptopt {

// Dense two-phase simplex for the tiny LPs used by the geometry layer
// (feasibility probes, boundedness tests, pseudo-face tagging, ray
// expressibility). Sizes stay in the tens of rows/columns.

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

enum class RowSense { kGe, kLe, kEq };

struct LpResult {
  LpStatus status;
  Eigen::VectorXd x;
  double objective = 0.0;
};

class LinearProgram {
 public:
  // num_vars variables, free unless marked nonnegative.
  explicit LinearProgram(int num_vars);

  void set_objective(const Eigen::VectorXd& c);  // minimize c'x
  void mark_nonnegative(int var);
  void add_row(const Eigen::VectorXd& a, RowSense sense, double rhs);
  // convenience: lo <= x_i <= hi as two rows
  void add_bounds(int var, double lo, double hi);

  int num_vars() const { return num_vars_; }

  LpResult solve() const;

 private:
  int num_vars_;
  Eigen::VectorXd c_;
  std::vector<bool> nonneg_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
};

// Lawson-Hanson nonnegative least squares: min ||A w - b||, w >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol = 1e-12, int max_iter = 0);

}  // namespace asymptopt

#endif
