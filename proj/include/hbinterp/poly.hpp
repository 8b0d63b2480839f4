#pragma once

// Complex polynomials in ascending coefficient order and their roots.

#include <span>
#include <vector>

#include "hbinterp/core.hpp"

namespace hbinterp {

class ComplexPoly {
 public:
  ComplexPoly() = default;
  /// Ascending coefficients; exact trailing zeros are trimmed.
  explicit ComplexPoly(std::vector<Complex> coeffs);
  ComplexPoly(std::initializer_list<Complex> coeffs) : ComplexPoly(std::vector<Complex>(coeffs)) {}

  static ComplexPoly constant(Complex c) { return ComplexPoly(std::vector<Complex>{c}); }
  static ComplexPoly monomial(int k, Complex c = 1.0);
  /// lead * prod (z - r).
  static ComplexPoly from_roots(std::span<const Complex> roots, Complex lead = 1.0);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Complex>& coeffs() const { return c_; }
  Complex coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Complex(0.0); }
  Complex leading() const { return c_.empty() ? Complex(0.0) : c_.back(); }
  double max_abs_coeff() const;

  Complex operator()(Complex z) const;
  ComplexPoly derivative() const;
  /// Drops leading coefficients with modulus <= rel_tol * max|coeff|.
  ComplexPoly trimmed(double rel_tol) const;
  /// Coefficients of w -> p(w + c).
  ComplexPoly shifted(Complex c) const;

  struct LinearDivision;
  /// p = (z - root) q + remainder, computed top-down.
  LinearDivision divide_linear(Complex root) const;

  ComplexPoly& operator+=(const ComplexPoly& o);
  ComplexPoly& operator-=(const ComplexPoly& o);
  ComplexPoly& operator*=(Complex s);
  friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
  friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
  friend ComplexPoly operator*(ComplexPoly a, Complex s) { return a *= s; }
  friend ComplexPoly operator*(Complex s, ComplexPoly a) { return a *= s; }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
  friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;

 private:
  void trim();
  std::vector<Complex> c_;
};

struct ComplexPoly::LinearDivision {
  ComplexPoly quotient;
  Complex remainder;
};

struct RootCluster {
  Complex value;
  int multiplicity = 1;
};

struct RootOptions {
  int max_iterations = 200;
  /// Approximations closer than this are always merged into one cluster.
  double cluster_radius = 1e-6;
};

/// Roots grouped by multiplicity. Aberth-Ehrlich simultaneous iteration,
/// followed by clustering of overlapping inclusion discs and refinement of
/// each multiple root as a simple root of p^(m-1).
/// Throws NonConvergenceError if the iteration cap is reached.
std::vector<RootCluster> find_roots(const ComplexPoly& p, const RootOptions& opts = {});

/// All roots repeated according to multiplicity.
std::vector<Complex> poly_roots(const ComplexPoly& p, const RootOptions& opts = {});

}  // namespace hbinterp
