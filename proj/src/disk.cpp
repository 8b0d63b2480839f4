#include "hbinterp/disk.hpp"

#include <algorithm>
#include <string>

namespace hbinterp {

namespace {

Complex guarded_denominator(Complex lambda, Complex z, double guard) {
  const Complex d = 1.0 - std::conj(lambda) * z;
  if (std::abs(d) < guard) throw PoleProximityError("evaluation point within guard of a Blaschke pole");
  return d;
}

// Taylor coefficients at z0 of the normalized factor attached to lambda.
std::vector<Complex> factor_taylor(Complex lambda, Complex z0, int order, double guard) {
  std::vector<Complex> c(order + 1, Complex(0.0));
  if (lambda == Complex(0.0)) {
    c[0] = z0;
    if (order >= 1) c[1] = 1.0;
    return c;
  }
  const Complex unit = -std::abs(lambda) / lambda;
  const Complex d = guarded_denominator(lambda, z0, guard);
  const Complex lc = std::conj(lambda);
  c[0] = unit * (z0 - lambda) / d;
  Complex term = unit * one_minus_abs2(lambda) / (d * d);
  for (int j = 1; j <= order; ++j) {
    c[j] = term;
    term *= lc / d;
  }
  return c;
}

std::vector<Complex> product_taylor(const BlaschkeProduct& b, Complex z0, int order, double guard) {
  if (order < 0) throw DomainError("Taylor order must be nonnegative");
  std::vector<Complex> acc(order + 1, Complex(0.0));
  acc[0] = 1.0;
  std::vector<Complex> next(order + 1);
  for (const auto& p : b.zeros.points()) {
    const auto f = factor_taylor(p.value(), z0, order, guard);
    for (int k = 0; k <= order; ++k) {
      Complex s = 0.0;
      for (int i = 0; i <= k; ++i) s += acc[i] * f[k - i];
      next[k] = s;
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace

DiskSequence DiskSequence::from_complex(std::span<const Complex> zs) {
  std::vector<UnitDiskPoint> pts;
  pts.reserve(zs.size());
  for (Complex z : zs) pts.emplace_back(z);
  return DiskSequence(std::move(pts));
}

DiskSequence DiskSequence::from_family(const FamilyDescriptor& family) {
  std::vector<UnitDiskPoint> pts;
  const std::size_t n = family.radii.count();
  pts.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double r = family.radii.radius(k);
    if (!(1.0 - r > kDiskMargin)) {
      throw DomainError("family point " + std::to_string(k) + " is not strictly interior (1 - r <= 1e-14)");
    }
    pts.emplace_back(std::polar(r, family.angle(k)));
  }
  return DiskSequence(std::move(pts), family);
}

std::vector<Complex> DiskSequence::values() const {
  std::vector<Complex> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.value());
  return out;
}

DiskSequence DiskSequence::truncated(std::size_t n) const {
  DiskSequence out;
  out.points_.assign(points_.begin(), points_.begin() + std::min(n, points_.size()));
  if (family_) out.family_ = FamilyDescriptor{family_->radii.truncated(n), family_->angles};
  return out;
}

DiskSequence DiskSequence::with_point(UnitDiskPoint p) const {
  DiskSequence out;
  out.points_ = points_;
  out.points_.push_back(p);
  return out;
}

double rho(UnitDiskPoint z, UnitDiskPoint w) {
  const Complex num = z.value() - w.value();
  if (num == Complex(0.0)) return 0.0;
  return std::abs(num) / std::abs(one_minus_conj_prod(w.value(), z.value()));
}

Complex blaschke_factor_eval(UnitDiskPoint lambda, Complex z) {
  require_finite(z, "blaschke_factor_eval");
  const Complex d = guarded_denominator(lambda.value(), z, kPoleGuard);
  return (z - lambda.value()) / d;
}

Complex blaschke_factor_deriv(UnitDiskPoint lambda, Complex z, int j) {
  require_finite(z, "blaschke_factor_deriv");
  if (j < 1) throw DomainError("blaschke_factor_deriv: order must be >= 1");
  const Complex lc = std::conj(lambda.value());
  const Complex d = guarded_denominator(lambda.value(), z, kPoleGuard);
  double fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= k;
  return fact * std::pow(lc, j - 1) * one_minus_abs2(lambda.value()) / std::pow(d, j + 1);
}

Complex blaschke_eval(const BlaschkeProduct& b, Complex z) {
  require_finite(z, "blaschke_eval");
  Complex acc = 1.0;
  for (const auto& p : b.zeros.points()) {
    const Complex l = p.value();
    if (l == Complex(0.0)) {
      acc *= z;
    } else {
      const Complex d = guarded_denominator(l, z, kPoleGuard);
      acc *= (std::abs(l) / l) * (l - z) / d;
    }
  }
  return acc;
}

std::vector<Complex> blaschke_taylor(const BlaschkeProduct& b, Complex z0, int order) {
  require_finite(z0, "blaschke_taylor");
  return product_taylor(b, z0, order, kPoleGuard);
}

std::vector<Complex> blaschke_taylor_at_boundary(const BlaschkeProduct& b, UnitCirclePoint zeta, int order) {
  return product_taylor(b, zeta.value(), order, kBoundaryPoleGuard);
}

double ahern_clark_sum(const DiskSequence& zeros, UnitCirclePoint zeta, int order) {
  if (order < 0) throw DomainError("ahern_clark_sum: order must be nonnegative");
  double s = 0.0;
  for (const auto& p : zeros.points()) {
    const double dist = std::abs(zeta.value() - p.value());
    s += (1.0 - std::abs(p.value())) / std::pow(dist, order + 1);
  }
  return s;
}

std::vector<Complex> blaschke_radial_derivatives(const BlaschkeProduct& b, UnitCirclePoint zeta, int j,
                                                 std::span<const double> r_grid) {
  if (j < 0) throw DomainError("blaschke_radial_derivatives: order must be nonnegative");
  double fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= k;
  std::vector<Complex> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("blaschke_radial_derivatives: radii must lie in [0, 1]");
    const double guard = r == 1.0 ? kBoundaryPoleGuard : kPoleGuard;
    const auto c = product_taylor(b, r * zeta.value(), j, guard);
    out.push_back(fact * c[j]);
  }
  return out;
}

Complex szego_kernel(UnitDiskPoint lambda, Complex z) {
  require_finite(z, "szego_kernel");
  return 1.0 / guarded_denominator(lambda.value(), z, kPoleGuard);
}

}  // namespace hbinterp
