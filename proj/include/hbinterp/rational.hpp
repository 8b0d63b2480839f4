#pragma once

// Rational functions with poles off the closed disk, Fejer-Riesz spectral
// factorization, and the Pythagorean pair (a, b) with |a|^2 + |b|^2 = 1 on
// the circle.

#include <functional>
#include <span>
#include <vector>

#include "hbinterp/core.hpp"
#include "hbinterp/disk.hpp"
#include "hbinterp/poly.hpp"

namespace hbinterp {

/// Distance beyond the unit circle that every pole must keep.
inline constexpr double kPoleMargin = 1e-10;
/// |1 - |w|| below this marks a root as lying on the circle.
inline constexpr double kBoundaryRootTolerance = 1e-8;
inline constexpr int kDefaultCircleGrid = 4096;

class RationalFn {
 public:
  /// Throws DomainError if den is zero or has a root with |root| <= 1 + 1e-10.
  /// Common roots of num and den are cancelled.
  RationalFn(ComplexPoly num, ComplexPoly den);
  static RationalFn polynomial(ComplexPoly p) { return {std::move(p), ComplexPoly::constant(1.0)}; }
  static RationalFn constant(Complex c) { return polynomial(ComplexPoly::constant(c)); }

  const ComplexPoly& num() const { return num_; }
  const ComplexPoly& den() const { return den_; }
  /// min |pole|, +inf for polynomials.
  double pole_radius() const { return pole_radius_; }
  bool is_zero() const { return num_.is_zero(); }

  Complex operator()(Complex z) const;

  friend RationalFn operator*(const RationalFn& l, const RationalFn& r);
  friend RationalFn operator+(const RationalFn& l, const RationalFn& r);
  friend RationalFn operator-(const RationalFn& l, const RationalFn& r);
  friend RationalFn operator*(Complex s, const RationalFn& r);

 private:
  struct Unchecked {};
  RationalFn(ComplexPoly num, ComplexPoly den, double pole_radius, Unchecked)
      : num_(std::move(num)), den_(std::move(den)), pole_radius_(pole_radius) {}

  ComplexPoly num_;
  ComplexPoly den_;
  double pole_radius_;
};

/// (lambda/|lambda|)-normalized product as num/den, num = prod unit (lambda - z).
RationalFn blaschke_to_rational(const BlaschkeProduct& b);

/// Sup of |f| on the circle: uniform grid, then golden-section refinement
/// around the largest grid values.
double circle_sup(const std::function<Complex(Complex)>& f, int grid = kDefaultCircleGrid);

struct BoundaryZero {
  UnitCirclePoint zeta;
  int multiplicity = 1;
};

class BoundaryZeroSet {
 public:
  BoundaryZeroSet() = default;
  /// Requires multiplicities >= 1 and pairwise distances > 1e-8.
  explicit BoundaryZeroSet(std::vector<BoundaryZero> zeros);

  std::span<const BoundaryZero> zeros() const { return zeros_; }
  std::size_t size() const { return zeros_.size(); }
  bool empty() const { return zeros_.empty(); }
  const BoundaryZero& operator[](std::size_t i) const { return zeros_[i]; }
  int total_multiplicity() const;
  int max_multiplicity() const;
  /// Monic prod (z - zeta_j)^(m_j).
  ComplexPoly a0() const;

 private:
  std::vector<BoundaryZero> zeros_;
};

struct RationalPair {
  RationalFn b;
  RationalFn a;
  BoundaryZeroSet zeros;
  int N = 0;
  int M = 0;
};

/// Outer s of degree d with |s|^2 = sum_k c_k e^{ik theta}. The input lists
/// c_{-d}..c_d (length 2d + 1) and must be Hermitian.
ComplexPoly fejer_riesz(std::span<const Complex> laurent);

struct MateOptions {
  int grid = kDefaultCircleGrid;
  double sup_tolerance = 1e-9;
};

/// The outer a with a(0) > 0 and |a|^2 + |b|^2 = 1 on the circle, together
/// with the boundary zeros of a.
RationalPair pythagorean_mate(const RationalFn& b, const MateOptions& opts = {});

/// Pair whose mate a is a positive multiple of prod (z - zeta_j)^(m_j).
RationalPair pair_from_boundary_zeros(const BoundaryZeroSet& zeros, const MateOptions& opts = {});

struct PairReport {
  double max_residual = 0.0;          // max | |a|^2 + |b|^2 - 1 | on the grid
  double min_num_root_modulus = 0.0;  // over roots of num(a); +inf if constant
  bool outer = false;
  bool a0_positive = false;
  double a_sup = 0.0;
  double b_sup = 0.0;
  bool pass = false;
};

PairReport verify_pair(const RationalPair& pair, int grid_size = kDefaultCircleGrid, double tol = 1e-9);

struct DiskGrid {
  int radial = 64;
  int angular = 64;
  double r_max = 1.0 - 1e-4;
};

/// min of |a|^2 + |b|^2 over a polar grid of the disk.
double corona_lower_bound(const RationalPair& pair, const DiskGrid& grid = {});

}  // namespace hbinterp
