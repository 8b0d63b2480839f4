#include "hbinterp/core.hpp"

namespace hbinterp {

namespace {

struct TwoTerm {
  double hi;
  double lo;
};

TwoTerm two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

TwoTerm two_square(double a) {
  const double p = a * a;
  return {p, std::fma(a, a, -p)};
}

}  // namespace

double one_minus_abs2(Complex z) {
  const TwoTerm x2 = two_square(z.real());
  const TwoTerm y2 = two_square(z.imag());
  const TwoTerm s1 = two_sum(1.0, -x2.hi);
  const TwoTerm s2 = two_sum(s1.hi, -y2.hi);
  return s2.hi + (s1.lo + s2.lo - x2.lo - y2.lo);
}

Complex one_minus_conj_prod(Complex w, Complex z) {
  return one_minus_abs2(w) + std::conj(w) * (w - z);
}

UnitDiskPoint::UnitDiskPoint(Complex z) : z_(require_finite(z, "UnitDiskPoint")) {
  if (!(std::abs(z) < 1.0 - kDiskMargin)) {
    throw DomainError("UnitDiskPoint: |z| must be < 1 - 1e-14");
  }
}

UnitCirclePoint::UnitCirclePoint(Complex z) : z_(require_finite(z, "UnitCirclePoint")) {
  if (std::abs(std::abs(z) - 1.0) > kCircleTolerance) {
    throw DomainError("UnitCirclePoint: ||z| - 1| must be <= 1e-12");
  }
}

}  // namespace hbinterp
