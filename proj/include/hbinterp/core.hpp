#pragma once

// Scalar types, validated disk/circle points and the error hierarchy shared
// by every module.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hbinterp {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Interior margin: a disk point must satisfy |z| < 1 - kDiskMargin.
inline constexpr double kDiskMargin = 1e-14;
/// A circle point must satisfy ||z| - 1| <= kCircleTolerance.
inline constexpr double kCircleTolerance = 1e-12;
/// |1 - conj(lambda) z| below this is treated as hitting a pole.
inline constexpr double kPoleGuard = 1e-14;
/// Boundary-evaluation pole guard (Taylor expansions at circle points).
inline constexpr double kBoundaryPoleGuard = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input or violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation too close to a pole.
class PoleProximityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Function is not analytic at a requested boundary point.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method hit its cap before meeting its tolerance.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline Complex require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw DomainError(std::string(what) + ": non-finite complex value");
  return z;
}

/// 1 - |z|^2 evaluated with error-free products so that points very close to
/// the circle keep their relative accuracy.
double one_minus_abs2(Complex z);

/// 1 - conj(w) z, accurate when w and z are both close to the same boundary
/// point.
Complex one_minus_conj_prod(Complex w, Complex z);

/// Point of the open unit disk with |z| < 1 - kDiskMargin.
class UnitDiskPoint {
 public:
  explicit UnitDiskPoint(Complex z);
  UnitDiskPoint(double re, double im = 0.0) : UnitDiskPoint(Complex(re, im)) {}

  Complex value() const { return z_; }
  operator Complex() const { return z_; }

  friend bool operator==(const UnitDiskPoint&, const UnitDiskPoint&) = default;

 private:
  Complex z_;
};

/// Point of the unit circle, ||z| - 1| <= kCircleTolerance.
class UnitCirclePoint {
 public:
  explicit UnitCirclePoint(Complex z);
  UnitCirclePoint(double re, double im = 0.0) : UnitCirclePoint(Complex(re, im)) {}

  static UnitCirclePoint from_angle(double theta) { return UnitCirclePoint(std::polar(1.0, theta)); }

  Complex value() const { return z_; }
  operator Complex() const { return z_; }

  friend bool operator==(const UnitCirclePoint&, const UnitCirclePoint&) = default;

 private:
  Complex z_;
};

}  // namespace hbinterp
