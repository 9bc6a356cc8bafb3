#include "asymptopt/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace asymptopt {

namespace {

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void check_dim(int n, const Vector& x) {
  if (x.size() != n)
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match variable count " + std::to_string(n));
}

// Append all exponent vectors of total degree exactly `deg`, lexicographic
// descending (x1-heavy first), matching the paper's listing.
void enumerate_degree(int n, int deg, int pos, Exponents& cur, std::vector<Exponents>& out) {
  if (pos == n - 1) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(n, deg - e, pos + 1, cur, out);
  }
}

}  // namespace

Polynomial::Polynomial(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("variable count must be >= 1");
}

Polynomial::Polynomial(int n, const std::map<Exponents, double, MonomialOrder>& terms)
    : Polynomial(n) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  p.add_term(Exponents(n, 0), c);
  return p;
}

Polynomial Polynomial::term(int n, const Exponents& e, double c) {
  Polynomial p(n);
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("variable index out of range");
  Exponents e(n, 0);
  e[i] = 1;
  return term(n, e, 1.0);
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != n_)
    throw std::invalid_argument("exponent vector length does not match variable count");
  for (int ei : e)
    if (ei < 0) throw std::invalid_argument("negative exponent");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (std::abs(c) > kDropTol) terms_.emplace(e, c);
  } else {
    it->second += c;
    if (std::abs(it->second) <= kDropTol) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

double Polynomial::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::evaluate(const Vector& x) const {
  check_dim(n_, x);
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < n_; ++i)
      if (e[i] > 0) t *= int_pow(x[i], e[i]);
    sum += t;
  }
  return sum;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(n_);
  for (int i = 0; i < n_; ++i) {
    Polynomial gi(n_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponents de = e;
      de[i] -= 1;
      gi.add_term(de, c * e[i]);
    }
    g.push_back(std::move(gi));
  }
  return g;
}

std::vector<std::vector<Polynomial>> Polynomial::hessian() const {
  const auto g = gradient();
  std::vector<std::vector<Polynomial>> h;
  h.reserve(n_);
  for (int i = 0; i < n_; ++i) h.push_back(g[i].gradient());
  return h;
}

Vector Polynomial::gradient_at(const Vector& x) const {
  check_dim(n_, x);
  Vector g = Vector::Zero(n_);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      double t = c * e[i];
      for (int j = 0; j < n_; ++j) {
        const int p = (j == i) ? e[j] - 1 : e[j];
        if (p > 0) t *= int_pow(x[j], p);
      }
      g[i] += t;
    }
  }
  return g;
}

Matrix Polynomial::hessian_at(const Vector& x) const {
  check_dim(n_, x);
  const auto h = hessian();
  Matrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = h[i][j].evaluate(x);
  return m;
}

Polynomial Polynomial::homogeneous_component(int l) const {
  if (l < 0) throw std::invalid_argument("component degree must be >= 0");
  Polynomial out(n_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == l) out.add_term(e, c);
  return out;
}

bool Polynomial::is_homogeneous(int l) const {
  for (const auto& [e, c] : terms_)
    if (total_degree(e) != l) return false;
  return true;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  if (rhs.n_ != n_) throw std::invalid_argument("variable count mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  return *this + rhs * -1.0;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) out.add_term(e, c * s);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (rhs.n_ != n_) throw std::invalid_argument("variable count mismatch");
  Polynomial out(n_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      Exponents e(n_);
      for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::vector<double> Polynomial::restrict_to_ray(const Vector& x0, const Vector& v) const {
  check_dim(n_, x0);
  check_dim(n_, v);
  const int d = degree();
  std::vector<double> coeffs(std::max(d + 1, 1), 0.0);
  // Expand prod_i (x0_i + t v_i)^{e_i} term by term via repeated
  // univariate convolution; degrees stay tiny.
  for (const auto& [e, c] : terms_) {
    std::vector<double> acc{c};
    for (int i = 0; i < n_; ++i) {
      for (int rep = 0; rep < e[i]; ++rep) {
        std::vector<double> nxt(acc.size() + 1, 0.0);
        for (size_t k = 0; k < acc.size(); ++k) {
          nxt[k] += acc[k] * x0[i];
          nxt[k + 1] += acc[k] * v[i];
        }
        acc = std::move(nxt);
      }
    }
    for (size_t k = 0; k < acc.size(); ++k) coeffs[k] += acc[k];
  }
  return coeffs;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    os << std::abs(c);
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      os << "*x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
    first = false;
  }
  return os.str();
}

MonomialBasis::MonomialBasis(int n, int min_degree, int max_degree) : n_(n) {
  if (n < 1) throw std::invalid_argument("variable count must be >= 1");
  if (min_degree < 0 || max_degree < min_degree)
    throw std::invalid_argument("bad degree range");
  Exponents cur(n, 0);
  for (int deg = min_degree; deg <= max_degree; ++deg)
    enumerate_degree(n, deg, 0, cur, monomials_);
  for (int i = 0; i < size(); ++i) index_.emplace(monomials_[i], i);
}

int MonomialBasis::index_of(const Exponents& e) const {
  auto it = index_.find(e);
  return it == index_.end() ? -1 : it->second;
}

Vector MonomialBasis::evaluate(const Vector& x) const {
  check_dim(n_, x);
  Vector out(size());
  for (int i = 0; i < size(); ++i) {
    double t = 1.0;
    for (int j = 0; j < n_; ++j)
      if (monomials_[i][j] > 0) t *= int_pow(x[j], monomials_[i][j]);
    out[i] = t;
  }
  return out;
}

Vector MonomialBasis::coefficients(const Polynomial& p) const {
  if (p.n() != n_) throw std::invalid_argument("variable count mismatch");
  Vector out = Vector::Zero(size());
  for (const auto& [e, c] : p.terms()) {
    const int i = index_of(e);
    if (i < 0) throw std::invalid_argument("polynomial has a term outside the basis");
    out[i] = c;
  }
  return out;
}

Polynomial MonomialBasis::polynomial(const Vector& coeffs) const {
  if (coeffs.size() != size()) throw std::invalid_argument("coefficient length mismatch");
  std::map<Exponents, double, MonomialOrder> terms;
  for (int i = 0; i < size(); ++i)
    if (coeffs[i] != 0.0) terms.emplace(monomials_[i], coeffs[i]);
  return Polynomial(n_, terms);
}

double l2_norm(const Polynomial& p, int ambient_degree) {
  if (p.degree() > ambient_degree)
    throw std::invalid_argument("polynomial degree exceeds the ambient degree");
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += c * c;
  return std::sqrt(s);
}

std::vector<double> leading_limit_check(const Polynomial& p, const Vector& x,
                                        const std::vector<double>& lambda_schedule) {
  if (lambda_schedule.empty()) throw std::invalid_argument("empty lambda schedule");
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("objective degree must be >= 1");
  std::vector<double> out;
  out.reserve(lambda_schedule.size());
  for (double lam : lambda_schedule) out.push_back(p.evaluate(lam * x) / int_pow(lam, d));
  return out;
}

CauchySchwarzBound cauchy_schwarz_bound(const Polynomial& p, const Vector& x, int d) {
  const MonomialBasis basis = MonomialBasis::full(p.n(), d);
  const double bound = basis.evaluate(x).norm() * l2_norm(p, d);
  return {bound, p.evaluate(x)};
}

Polynomial random_polynomial(int n, int d, Rng& rng, CoeffDistribution dist,
                             bool homogeneous_only) {
  if (n < 1 || d < 1) throw std::invalid_argument("need n >= 1 and d >= 1");
  const MonomialBasis basis =
      homogeneous_only ? MonomialBasis::homogeneous(n, d) : MonomialBasis::full(n, d);
  Vector coeffs(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    coeffs[i] = (dist == CoeffDistribution::kGaussian) ? rng.gaussian() : rng.uniform(-1.0, 1.0);
  return basis.polynomial(coeffs);
}

Polynomial random_polynomial(int n, int d, std::uint64_t seed, CoeffDistribution dist,
                             bool homogeneous_only) {
  Rng rng(seed);
  return random_polynomial(n, d, rng, dist, homogeneous_only);
}

}  // namespace asymptopt
