#pragma once

// Interpolating sequences for H(b): the Carleson constant, the boundary sum
// condition, family verdicts, a finite Nevanlinna-Pick solver and the
// constructive multiplier interpolant.

#include <span>
#include <string>
#include <vector>

#include "hbinterp/core.hpp"
#include "hbinterp/disk.hpp"
#include "hbinterp/hb_space.hpp"
#include "hbinterp/rational.hpp"

namespace hbinterp {

struct CarlesonReport {
  double delta = 1.0;       // min over n of prod_{k != n} rho(lambda_n, lambda_k)
  double separation = 1.0;  // min over pairs of rho
  std::size_t argmin_index = 0;
};

/// Exact O(n^2) evaluation with log-sums. Throws DomainError when two points
/// are within pseudohyperbolic distance 1e-10.
CarlesonReport carleson_delta(const DiskSequence& seq);

/// delta of the first n points for each n in truncations (ascending).
std::vector<double> carleson_delta_curve(const DiskSequence& seq, std::span<const std::size_t> truncations);

struct ZeroSum {
  UnitCirclePoint zeta;
  int multiplicity = 1;
  std::vector<std::size_t> truncations;  // 2, 4, 8, ... and the full length
  std::vector<double> partial_sums;
  SeriesClass classification = SeriesClass::unknown;
};

struct SumConditionReport {
  std::vector<ZeroSum> per_zero;
};

/// Partial sums of sum_n (1 - |lambda_n|^2)/|zeta_j - lambda_n|^(2 m_j) per
/// boundary zero. Family-tagged sequences also get the closed-form
/// classification of the infinite sum (almost sure for Steinhaus angles).
SumConditionReport sum_condition(const DiskSequence& seq, const BoundaryZeroSet& zeros);

enum class Verdict { interpolating, not_interpolating, indeterminate, interpolating_finite };

const char* to_string(Verdict v);

struct DecisionReport {
  CarlesonReport carleson;
  std::vector<std::size_t> delta_truncations;
  std::vector<double> delta_curve;
  SumConditionReport sums;
  SeriesClass carleson_class = SeriesClass::unknown;  // convergent means the condition holds
  Verdict verdict = Verdict::indeterminate;
  bool almost_sure = false;  // verdict concerns random angles
  std::string reason;
};

/// Bundles the Carleson and sum diagnostics. Verdicts about limits are only
/// issued for family-tagged sequences; an untagged finite sequence is always
/// interpolating.
DecisionReport decide(const RationalPair& pair, const DiskSequence& seq);

struct PickProblem {
  DiskSequence nodes;
  std::vector<Complex> targets;
  double scale = 1.0;
};

/// True iff [(t^2 - w_i conj(w_j)) / (1 - lambda_i conj(lambda_j))] is positive
/// semidefinite, tested by pivoted Cholesky with pivots >= -1e-12 relative.
bool pick_feasible(const PickProblem& p);

/// Interpolant of norm <= scale in chain form: f = scale T_1(T_2(... gamma_n)),
/// T_k(s) = (gamma_k + phi_k s)/(1 + conj(gamma_k) phi_k s). Evaluation by the
/// chain stays accurate for clustered nodes near the circle, where the
/// expanded num/den is badly conditioned.
class SchurInterpolant {
 public:
  SchurInterpolant() = default;
  SchurInterpolant(std::vector<Complex> nodes, std::vector<Complex> params, double scale);

  const std::vector<Complex>& nodes() const { return nodes_; }
  const std::vector<Complex>& params() const { return params_; }
  double scale() const { return scale_; }

  Complex operator()(Complex z) const;
  /// Expanded num/den; may lose accuracy or throw for clustered nodes.
  RationalFn to_rational() const;

 private:
  std::vector<Complex> nodes_;
  std::vector<Complex> params_;
  double scale_ = 0.0;
};

struct PickBound {
  double t_star = 0.0;
  /// The interpolant is built at t_star (1 + inflation). The first try is
  /// 1e-6; it grows tenfold (up to 1e-2) while the recursion reaches the circle.
  double inflation = 0.0;
  SchurInterpolant chain;
  double boundary_sup = 0.0;  // of the chain
};

/// Minimal sup norm t_star by bisection to 1e-9 relative, and the Schur
/// interpolant at t_star (1 + inflation). All-zero targets give t_star = 0.
PickBound np_bound(const DiskSequence& nodes, std::span<const Complex> targets);

struct PickSolution {
  double t_star = 0.0;
  double inflation = 0.0;
  RationalFn f = RationalFn::constant(0.0);
  double boundary_sup = 0.0;  // of f
};

/// np_bound followed by expansion of the interpolant as a rational function.
PickSolution np_solve(const DiskSequence& nodes, std::span<const Complex> targets);

struct InterpolantCertificate {
  RationalFn F = RationalFn::constant(0.0);
  double boundary_sup = 0.0;
  std::vector<double> value_residuals;
  HbDecomposition decomposition;
  std::size_t lambda0_count = 0;  // points routed through add_point
  std::size_t lambda1_count = 0;  // points near boundary zeros of p_N
};

/// Multiplier interpolant F in a H^2 with F(lambda_n) = v_n. The Blaschke product of
/// the nodes is decomposed as a0 g + p_N, the nodes are split by their
/// distance to the boundary zeros of p_N, two Pick problems are solved and
/// the pieces are assembled as B_{Lambda_1} (B - p_N) f_1 + a0 h_1. Nodes on
/// zeros of p_N are added last through add_point.
InterpolantCertificate construct_multiplier(const RationalPair& pair, const DiskSequence& seq,
                                            std::span<const Complex> values);

/// f = F + a B / (a(lambda0) B(lambda0)) (v0 - F(lambda0)). Throws DomainError if
/// |a(lambda0) B(lambda0)| < 1e-12.
RationalFn add_point(const RationalFn& F, const RationalPair& pair, const BlaschkeProduct& b, UnitDiskPoint lambda0,
                     Complex v0);

}  // namespace hbinterp
