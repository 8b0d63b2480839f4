#pragma once

// The space H(b) for a rational pair: the decomposition f = a0 g + p, its
// norm, local Dirichlet energies D_zeta^N, reproducing kernels and Gram
// diagnostics, and Toeplitz range residuals.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hbinterp/core.hpp"
#include "hbinterp/disk.hpp"
#include "hbinterp/poly.hpp"
#include "hbinterp/rational.hpp"

namespace hbinterp {

enum class SeriesSource { polynomial, rational, blaschke, explicit_coefficients };

/// Taylor coefficients at 0 of an H^2 function, with an estimate of the l^2
/// norm of the dropped tail. Polynomial, rational and Blaschke sources keep
/// their closed form so that boundary jets and exact values stay available.
class AnalyticSeries {
 public:
  static AnalyticSeries from_polynomial(ComplexPoly p);
  /// Coefficients are generated until they fall below 1e-18 relative to the
  /// largest one (at most 2^22 terms).
  static AnalyticSeries from_rational(RationalFn f);
  static AnalyticSeries from_blaschke(BlaschkeProduct b);
  static AnalyticSeries from_coefficients(std::vector<Complex> coeffs, double tail_bound = 0.0);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex(0.0); }
  double tail_bound() const { return tail_bound_; }
  SeriesSource source() const { return source_; }
  /// Closed form for every source except explicit coefficients.
  const std::optional<RationalFn>& rational() const { return rational_; }
  const std::optional<BlaschkeProduct>& blaschke() const { return blaschke_; }

  Complex operator()(Complex z) const;
  /// l^2 norm of the stored coefficients (compensated summation).
  double h2_norm() const;
  /// f^(i)(zeta)/i! for i < count. Throws SingularityError without a closed form.
  std::vector<Complex> jet(Complex zeta, int count) const;

 private:
  AnalyticSeries() = default;
  std::vector<Complex> coeffs_;
  double tail_bound_ = 0.0;
  SeriesSource source_ = SeriesSource::explicit_coefficients;
  std::optional<RationalFn> rational_;
  std::optional<BlaschkeProduct> blaschke_;
};

struct HbDecomposition {
  AnalyticSeries g;
  ComplexPoly p;   // degree <= N - 1
  ComplexPoly a0;  // monic prod (z - zeta_j)^(m_j)
};

struct HbNorm {
  double value = 0.0;
  double error = 0.0;  // from the truncated tail of g
};

/// The p in P_{N-1} matching the jets of f of order m_j at every zeta_j
/// (confluent Newton divided differences).
ComplexPoly hermite_poly(const AnalyticSeries& f, const BoundaryZeroSet& zeros);

/// f = a0 g + p with p = hermite_poly(f, zeros) and g = (f - p)/a0 obtained by
/// synthetic division. Throws SingularityError if f has no closed form, and
/// DomainError if a division leaves a remainder above 1e-9 relative.
HbDecomposition decompose(const AnalyticSeries& f, const BoundaryZeroSet& zeros);
inline HbDecomposition decompose(const AnalyticSeries& f, const RationalPair& pair) {
  return decompose(f, pair.zeros);
}

/// sqrt(||g||^2 + ||p||^2).
HbNorm hb_norm(const HbDecomposition& d);

/// D_zeta^N(f) = ||(f - T_{N-1}(f, zeta)) / (z - zeta)^N||^2 computed from
/// coefficients after N synthetic divisions.
double local_dirichlet_norm(const AnalyticSeries& f, UnitCirclePoint zeta, int n);

struct QuadratureOptions {
  int initial_grid = 256;
  int max_grid = 1 << 20;
  double rel_tol = 1e-8;
};

/// D_zeta^N(B) by the periodic trapezoid rule on the circle, doubling the
/// grid until two successive values agree to rel_tol. Near zeta the
/// integrand is summed from the Taylor series of B to avoid cancellation.
double dirichlet_blaschke_quadrature(const BlaschkeProduct& b, UnitCirclePoint zeta, int n,
                                     const QuadratureOptions& opts = {});

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of D_zeta^N(phi_lambda f) = (1-|mu|^2)/|1-mu|^(2N) |sum_j F_j (1-conj mu)^j conj(mu)^(N-1-j)|^2
/// + D_zeta^N(f), with mu = conj(zeta) lambda and F_j the Taylor coefficients of
/// f(zeta z) at 1. The left side is computed by local_dirichlet_norm.
IdentitySides dirichlet_product_identity(const AnalyticSeries& f, UnitDiskPoint lambda, UnitCirclePoint zeta, int n);

/// k^b_w(z) = (1 - conj(b(w)) b(z)) / (1 - conj(w) z), evaluated in the form
/// conj(a(w)) a(z)/(1 - conj(w) z) + v(w)^* H v(z) / (conj(q(w)) q(z)), where H
/// is the polynomial quotient of conj(q)q - conj(p)p - conj(s)s by 1 - conj(w) z.
/// This stays accurate when w and z approach the circle together.
Complex kernel_kb(const RationalPair& pair, UnitDiskPoint w, UnitDiskPoint z);

/// The kernel straight from its defining quotient; used as a cross-check.
Complex kernel_kb_direct(const RationalPair& pair, UnitDiskPoint w, UnitDiskPoint z);

struct GramReport {
  Eigen::MatrixXcd matrix;
  double min_eig = 0.0;
  double max_eig = 0.0;
  std::vector<double> diag_norms;
};

/// Normalized kernel Gram matrix at the points of the sequence (size <= 4096).
GramReport gram(const RationalPair& pair, const DiskSequence& seq);

/// Coefficient k of T_{conj a} g is sum_j conj(a_j) g_{k+j}.
AnalyticSeries toeplitz_apply(const ComplexPoly& a, const AnalyticSeries& g);

struct RangeResidual {
  int truncation = 0;
  /// min ||(T_{conj a} g - f)_{0..T}|| over ||g|| <= budget, g supported on 0..T.
  double residual = 0.0;
  /// Norm of the minimal-norm preimage of f_{0..T} under the section.
  double preimage_norm = 0.0;
  double budget = 0.0;
  bool rank_deficient = false;
};

struct RangeOptions {
  /// Preimage budget as a multiple of ||f||.
  double budget_factor = 16.0;
};

/// Square (T+1) x (T+1) section of T_{conj a} with its singular value
/// decomposition, reusable across right-hand sides.
class ToeplitzSection {
 public:
  ToeplitzSection(const ComplexPoly& a, int truncation);
  ~ToeplitzSection();
  ToeplitzSection(ToeplitzSection&&) noexcept;
  ToeplitzSection& operator=(ToeplitzSection&&) noexcept;

  int truncation() const { return truncation_; }
  RangeResidual residual(const AnalyticSeries& f, const RangeOptions& opts = {}) const;

 private:
  struct Impl;
  int truncation_;
  std::unique_ptr<Impl> impl_;
};

/// Membership diagnostic for the range of T_{conj a}. A single truncation
/// cannot certify non-membership; see range_membership_curve.
RangeResidual range_membership_residual(const ComplexPoly& a, const AnalyticSeries& f, int truncation,
                                        const RangeOptions& opts = {});

std::vector<RangeResidual> range_membership_curve(const ComplexPoly& a, const AnalyticSeries& f,
                                                  std::span<const int> truncations, const RangeOptions& opts = {});

}  // namespace hbinterp
