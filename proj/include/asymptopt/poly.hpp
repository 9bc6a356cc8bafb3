#ifndef ASYMPTOPT_POLY_HPP
#define ASYMPTOPT_POLY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "asymptopt/rng.hpp"

namespace asymptopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Exponent vector of a monomial; length equals the ambient variable count.
using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) {
  int d = 0;
  for (int ei : e) d += ei;
  return d;
}

// Basis listing order: degree ascending, and within a degree lexicographic
// with x1 before x2 before ... before xn (so x1^2, x1x2, ..., xn^2).
struct MonomialOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;  // larger exponent vector = earlier in the listing
  }
};

// Sparse multivariate polynomial with real coefficients. Stored terms are
// nonzero; iteration follows the basis listing order above. Values are
// immutable after construction apart from the named mutators, all of which
// re-normalize (coefficients below kDropTol are removed).
class Polynomial {
 public:
  static constexpr double kDropTol = 1e-14;

  explicit Polynomial(int n);
  Polynomial(int n, const std::map<Exponents, double, MonomialOrder>& terms);

  static Polynomial zero(int n) { return Polynomial(n); }
  static Polynomial constant(int n, double c);
  // Single term c * x^e.
  static Polynomial term(int n, const Exponents& e, double c);
  // Convenience: the variable x_{i} (0-based index).
  static Polynomial variable(int n, int i);

  int n() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  // Max total degree over stored terms; -1 for the zero polynomial
  // (the paper leaves it undefined; callers that need an objective
  // must check degree() >= 1).
  int degree() const;

  const std::map<Exponents, double, MonomialOrder>& terms() const { return terms_; }
  double coeff(const Exponents& e) const;

  double evaluate(const Vector& x) const;
  std::vector<Polynomial> gradient() const;
  // d^2/dx_i dx_j as polynomials; symmetric n x n list.
  std::vector<std::vector<Polynomial>> hessian() const;
  Matrix hessian_at(const Vector& x) const;
  Vector gradient_at(const Vector& x) const;

  // Sum of the terms of total degree exactly l (zero polynomial when none).
  Polynomial homogeneous_component(int l) const;
  bool is_homogeneous(int l) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(double s) const;
  Polynomial operator*(const Polynomial& rhs) const;

  // Coefficients of the univariate polynomial t -> p(x0 + t*v),
  // index = power of t, length degree()+1 (all-zero for the zero poly).
  std::vector<double> restrict_to_ray(const Vector& x0, const Vector& v) const;

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, double c);

  int n_;
  std::map<Exponents, double, MonomialOrder> terms_;
};

// The graded-lex monomial basis of P_d (degree <= d) or H_d (degree == d).
class MonomialBasis {
 public:
  // All monomials of degree min_degree..max_degree in listing order.
  MonomialBasis(int n, int min_degree, int max_degree);

  static MonomialBasis full(int n, int d) { return MonomialBasis(n, 0, d); }
  static MonomialBasis homogeneous(int n, int d) { return MonomialBasis(n, d, d); }

  int n() const { return n_; }
  int size() const { return static_cast<int>(monomials_.size()); }
  const std::vector<Exponents>& monomials() const { return monomials_; }
  int index_of(const Exponents& e) const;  // -1 when absent

  // The vector X(x) of basis monomial values at x.
  Vector evaluate(const Vector& x) const;

  Vector coefficients(const Polynomial& p) const;  // throws if p has terms outside the basis
  Polynomial polynomial(const Vector& coeffs) const;

 private:
  int n_;
  std::vector<Exponents> monomials_;
  std::map<Exponents, int, MonomialOrder> index_;
};

// ell_2 norm of p in the degree-d coefficient basis; requires degree(p) <= d.
double l2_norm(const Polynomial& p, int ambient_degree);

// f(lambda x) / lambda^d for each lambda in the schedule (degree d = ambient).
std::vector<double> leading_limit_check(const Polynomial& p, const Vector& x,
                                        const std::vector<double>& lambda_schedule);

struct CauchySchwarzBound {
  double bound;
  double value;
};
// bound = ||X(x)|| * ||p||_d; guarantees |p(x)| <= bound.
CauchySchwarzBound cauchy_schwarz_bound(const Polynomial& p, const Vector& x, int d);

enum class CoeffDistribution { kGaussian, kUniform };

Polynomial random_polynomial(int n, int d, std::uint64_t seed,
                             CoeffDistribution dist = CoeffDistribution::kGaussian,
                             bool homogeneous_only = false);
Polynomial random_polynomial(int n, int d, Rng& rng,
                             CoeffDistribution dist = CoeffDistribution::kGaussian,
                             bool homogeneous_only = false);

}  // namespace asymptopt

#endif
