#ifndef ASYMPTOPT_COMMON_HPP
#define ASYMPTOPT_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace asymptopt {

// Thrown when a configured combinatorial cap (dimension, row count,
// pseudo-face count, box doublings) would be exceeded. The CLI maps it
// to exit code 4.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Schema or dimension error while reading a problem file. Exit code 1.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical tolerances, shared across modules. Field names match the
// "tolerances" block of the problem-file schema.
struct Tolerances {
  double tol_mu = 1e-6;        // regularity band: |mu| <= tol_mu -> NonRegular
  double tol_feas = 1e-9;      // cone/polyhedron membership
  double tol_proj = 1e-8;      // projection KKT residual
  double tol_opt = 1e-6;       // sphere-minimization optimality
  double strict_tol = 1e-7;    // Eaves condition (a) strict positivity
  double isolation_tol = 1e-7; // KKT isolation singular value
  double dedupe_witness = 1e-5;
  double dedupe_point = 1e-6;
};

// Combinatorial caps for the enumeration routines.
struct Caps {
  int max_dim = 8;        // ambient n for ray enumeration
  int max_rows = 16;      // inequality rows p (2^p pseudo-faces)
  int max_doublings = 20; // expanding-box rounds in the solver
};

// Fixed 17-significant-digit rendering used for every floating-point
// field in reports, so identical runs produce identical bytes.
std::string format_double(double v);

// FNV-1a 64-bit over raw bytes; used to content-address report files.
std::uint64_t fnv1a64(const std::string& bytes);
std::string to_hex(std::uint64_t v);

}  // namespace asymptopt

#endif
