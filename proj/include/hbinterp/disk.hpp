#pragma once

// Disk geometry: pseudohyperbolic distance, Blaschke factors and finite
// Blaschke products with their derivatives at interior and boundary points.

#include <optional>
#include <span>
#include <vector>

#include "hbinterp/core.hpp"
#include "hbinterp/family.hpp"

namespace hbinterp {

/// Finite ordered list of interior points, optionally tagged with the family
/// that generated it.
class DiskSequence {
 public:
  DiskSequence() = default;
  explicit DiskSequence(std::vector<UnitDiskPoint> points) : points_(std::move(points)) {}
  DiskSequence(std::vector<UnitDiskPoint> points, FamilyDescriptor family)
      : points_(std::move(points)), family_(std::move(family)) {}

  static DiskSequence from_complex(std::span<const Complex> zs);
  /// Realizes the first `count` points of a family (all of them by default).
  static DiskSequence from_family(const FamilyDescriptor& family);

  std::span<const UnitDiskPoint> points() const { return points_; }
  std::vector<Complex> values() const;
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const UnitDiskPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::optional<FamilyDescriptor>& family() const { return family_; }

  /// First n points; a family tag is truncated along with the points.
  DiskSequence truncated(std::size_t n) const;
  DiskSequence with_point(UnitDiskPoint p) const;

 private:
  std::vector<UnitDiskPoint> points_;
  std::optional<FamilyDescriptor> family_;
};

/// Finite Blaschke product. A zero at the origin contributes z; a zero
/// lambda != 0 contributes (|lambda|/lambda) (lambda - z)/(1 - conj(lambda) z).
struct BlaschkeProduct {
  DiskSequence zeros;
};

/// Pseudohyperbolic distance |z - w| / |1 - conj(w) z|.
double rho(UnitDiskPoint z, UnitDiskPoint w);

/// Elementary factor (z - lambda)/(1 - conj(lambda) z).
Complex blaschke_factor_eval(UnitDiskPoint lambda, Complex z);

/// j-th derivative (j >= 1) of the elementary factor:
/// j! conj(lambda)^(j-1) (1 - |lambda|^2) / (1 - conj(lambda) z)^(j+1).
Complex blaschke_factor_deriv(UnitDiskPoint lambda, Complex z, int j);

Complex blaschke_eval(const BlaschkeProduct& b, Complex z);

/// Taylor coefficients B^(j)(z0)/j!, j = 0..order, of the product at any point
/// where every factor is analytic (factor-wise expansion and convolution).
std::vector<Complex> blaschke_taylor(const BlaschkeProduct& b, Complex z0, int order);

/// Coefficients of T_order(B, zeta). Fails if some zero makes
/// |1 - conj(lambda) zeta| < 1e-12.
std::vector<Complex> blaschke_taylor_at_boundary(const BlaschkeProduct& b, UnitCirclePoint zeta, int order);

/// sum_n (1 - |lambda_n|) / |zeta - lambda_n|^(order + 1).
double ahern_clark_sum(const DiskSequence& zeros, UnitCirclePoint zeta, int order);

/// B^(j)(r zeta) for each r in r_grid (r in [0, 1]).
std::vector<Complex> blaschke_radial_derivatives(const BlaschkeProduct& b, UnitCirclePoint zeta, int j,
                                                 std::span<const double> r_grid);

/// Szego kernel 1/(1 - conj(lambda) z).
Complex szego_kernel(UnitDiskPoint lambda, Complex z);

}  // namespace hbinterp
