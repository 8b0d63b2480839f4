#include "hbinterp/interpolation.hpp"

#include <algorithm>
#include <limits>
#include <variant>

#include <Eigen/Dense>

namespace hbinterp {

namespace {

constexpr double kDuplicateRho = 1e-10;
constexpr double kPivotTolerance = 1e-12;
constexpr double kBisectionTolerance = 1e-9;
constexpr double kSolveInflation = 1e-6;
constexpr double kMaxInflation = 1e-2;
constexpr double kUnimodularTolerance = 1e-6;
constexpr double kPnZeroTolerance = 1e-8;
constexpr double kAddPointGuard = 1e-12;

std::vector<std::size_t> dyadic_truncations(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t t = 2; t < n; t *= 2) out.push_back(t);
  if (n > 0) out.push_back(n);
  return out;
}

// Log of rho for distinct points; rho is recomputed in the stable form.
double log_rho(Complex z, Complex w) {
  const double r = std::abs(z - w) / std::abs(one_minus_conj_prod(w, z));
  if (r <= kDuplicateRho) throw DomainError("carleson_delta: points closer than pseudohyperbolic distance 1e-10");
  return std::log(r);
}

bool angle_hits(const FixedAngles& f, UnitCirclePoint zeta) {
  for (double t : f.values)
    if (std::abs(std::polar(1.0, t) - zeta.value()) <= kCircleTolerance) return true;
  return false;
}

// Closed-form behavior of the Carleson condition for a family. convergent
// stands for "holds" and divergent for "fails".
SeriesClass carleson_family_class(const FamilyDescriptor& fam) {
  if (std::holds_alternative<ExplicitRadii>(fam.radii.kind())) return SeriesClass::unknown;
  if (std::holds_alternative<FixedAngles>(fam.angles)) {
    // Points on finitely many rays: separated exactly for geometric radii.
    return std::holds_alternative<GeometricRadii>(fam.radii.kind()) ? SeriesClass::convergent : SeriesClass::divergent;
  }
  // Random angles: almost surely Carleson iff sum_k N_k^2 2^-k < infinity. For
  // power radii N_k grows like 2^(k/beta).
  if (const auto* p = std::get_if<PowerRadii>(&fam.radii.kind())) {
    if (std::abs(p->beta - 2.0) <= 1e-12) return SeriesClass::divergent_boundary;
    return p->beta > 2.0 ? SeriesClass::convergent : SeriesClass::divergent;
  }
  return SeriesClass::convergent;
}

SeriesClass zero_sum_class(const FamilyDescriptor& fam, const BoundaryZero& z) {
  if (std::holds_alternative<SteinhausAngles>(fam.angles))
    return classify_radii_series(fam.radii, 1.0 / (2.0 * z.multiplicity));
  if (angle_hits(std::get<FixedAngles>(fam.angles), z.zeta)) {
    // Radial approach: terms (1 + r)(1 - r)^(1 - 2m) do not tend to 0.
    return std::holds_alternative<ExplicitRadii>(fam.radii.kind()) ? SeriesClass::unknown : SeriesClass::divergent;
  }
  return classify_radii_series(fam.radii, 1.0);
}

// Pick matrix congruent to [(t^2 - w_i conj w_j)/(1 - lambda_i conj lambda_j)] by
// diag(sqrt(1 - |lambda_i|^2)), so the diagonal is t^2 - |w_i|^2.
Eigen::MatrixXcd pick_matrix(const DiskSequence& nodes, std::span<const Complex> w, double t) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  std::vector<double> s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = std::sqrt(one_minus_abs2(nodes[i].value()));
  Eigen::MatrixXcd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex li = nodes[i].value(), lj = nodes[j].value();
      p(i, j) = (t * t - w[i] * std::conj(w[j])) * s[i] * s[j] / std::conj(one_minus_conj_prod(li, lj));
    }
  return p;
}

// Pivoted Cholesky semidefiniteness test, pivots relative to `scale`.
bool is_psd(Eigen::MatrixXcd a, double scale) {
  const Eigen::Index n = a.rows();
  const double tol = kPivotTolerance * scale;
  std::vector<Eigen::Index> rest(n);
  for (Eigen::Index i = 0; i < n; ++i) rest[i] = i;
  while (!rest.empty()) {
    auto best = std::max_element(rest.begin(), rest.end(), [&](Eigen::Index x, Eigen::Index y) {
      return a(x, x).real() < a(y, y).real();
    });
    const Eigen::Index k = *best;
    const double d = a(k, k).real();
    if (d <= tol) {
      // Remaining block is numerically zero on the diagonal; it is PSD only if
      // its off-diagonal part is negligible too.
      for (Eigen::Index i : rest) {
        if (a(i, i).real() < -tol) return false;
        for (Eigen::Index j : rest)
          if (i != j && std::abs(a(i, j)) > std::sqrt(tol * scale) * 1e-3) return false;
      }
      return true;
    }
    rest.erase(best);
    for (Eigen::Index i : rest)
      for (Eigen::Index j : rest) a(i, j) -= a(i, k) * a(k, j) / d;
  }
  return true;
}

// Schur parameters for |values| < 1 with a strictly positive Pick matrix.
std::vector<Complex> schur_parameters(std::vector<Complex> z, std::vector<Complex> s) {
  std::vector<Complex> gamma;
  while (!z.empty()) {
    const Complex z0 = z.front(), s0 = s.front();
    if (!(std::abs(s0) < 1.0)) throw NonConvergenceError("np_solve: Schur parameter reached the unit circle");
    gamma.push_back(s0);
    std::vector<Complex> nz, ns;
    for (std::size_t k = 1; k < z.size(); ++k) {
      const Complex phi = (z[k] - z0) / one_minus_conj_prod(z0, z[k]);
      nz.push_back(z[k]);
      ns.push_back((s[k] - s0) / (one_minus_conj_prod(s0, s[k]) * phi));
    }
    z.swap(nz);
    s.swap(ns);
  }
  return gamma;
}

RationalFn blaschke_rational(const std::vector<UnitDiskPoint>& pts) {
  if (pts.empty()) return RationalFn::constant(1.0);
  return blaschke_to_rational(BlaschkeProduct{DiskSequence(pts)});
}

}  // namespace

CarlesonReport carleson_delta(const DiskSequence& seq) {
  const std::size_t n = seq.size();
  CarlesonReport out;
  if (n == 0) throw DomainError("carleson_delta: empty sequence");
  std::vector<double> logs(n, 0.0);
  double min_pair = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double l = log_rho(seq[i].value(), seq[j].value());
      logs[i] += l;
      logs[j] += l;
      min_pair = std::min(min_pair, l);
    }
  const auto it = std::min_element(logs.begin(), logs.end());
  out.argmin_index = static_cast<std::size_t>(it - logs.begin());
  out.delta = std::exp(*it);
  out.separation = n > 1 ? std::exp(min_pair) : 1.0;
  return out;
}

std::vector<double> carleson_delta_curve(const DiskSequence& seq, std::span<const std::size_t> truncations) {
  const std::size_t n = seq.size();
  std::vector<double> logs(n, 0.0), out;
  std::size_t done = 0;
  for (std::size_t t : truncations) {
    if (t < done || t > n || t == 0) throw DomainError("carleson_delta_curve: truncations must ascend within the sequence");
    for (std::size_t j = done; j < t; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const double l = log_rho(seq[i].value(), seq[j].value());
        logs[i] += l;
        logs[j] += l;
      }
    done = t;
    out.push_back(std::exp(*std::min_element(logs.begin(), logs.begin() + static_cast<std::ptrdiff_t>(t))));
  }
  return out;
}

SumConditionReport sum_condition(const DiskSequence& seq, const BoundaryZeroSet& zeros) {
  SumConditionReport out;
  const auto truncs = dyadic_truncations(seq.size());
  for (const auto& z : zeros.zeros()) {
    ZeroSum zs{z.zeta, z.multiplicity, truncs, {}, SeriesClass::unknown};
    double acc = 0.0, comp = 0.0;
    std::size_t next = 0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
      const Complex l = seq[n].value();
      const double term = one_minus_abs2(l) / std::pow(std::abs(z.zeta.value() - l), 2 * z.multiplicity);
      const double y = term - comp;
      const double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
      while (next < truncs.size() && truncs[next] == n + 1) {
        zs.partial_sums.push_back(acc);
        ++next;
      }
    }
    if (seq.family()) zs.classification = zero_sum_class(*seq.family(), z);
    out.per_zero.push_back(std::move(zs));
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::interpolating: return "interpolating";
    case Verdict::not_interpolating: return "not interpolating";
    case Verdict::indeterminate: return "indeterminate at truncation";
    case Verdict::interpolating_finite: return "interpolating (finite)";
  }
  return "indeterminate at truncation";
}

DecisionReport decide(const RationalPair& pair, const DiskSequence& seq) {
  DecisionReport out;
  out.carleson = carleson_delta(seq);
  out.delta_truncations = dyadic_truncations(seq.size());
  out.delta_curve = carleson_delta_curve(seq, out.delta_truncations);
  out.sums = sum_condition(seq, pair.zeros);

  if (!seq.family()) {
    out.verdict = Verdict::interpolating_finite;
    out.reason = "finite set without a generating family; every finite set is interpolating";
    return out;
  }
  const FamilyDescriptor& fam = *seq.family();
  out.almost_sure = std::holds_alternative<SteinhausAngles>(fam.angles);
  out.carleson_class = carleson_family_class(fam);
  bool unknown = out.carleson_class == SeriesClass::unknown;
  bool fails = out.carleson_class == SeriesClass::divergent || out.carleson_class == SeriesClass::divergent_boundary;
  std::string why;
  if (fails) why = "Carleson condition fails for the family";
  for (const auto& z : out.sums.per_zero) {
    if (z.classification == SeriesClass::unknown) unknown = true;
    if (z.classification == SeriesClass::divergent || z.classification == SeriesClass::divergent_boundary) {
      fails = true;
      if (why.empty()) why = "boundary sum diverges at a zero of the mate";
    }
  }
  if (fails) {
    out.verdict = Verdict::not_interpolating;
    out.reason = why;
  } else if (unknown) {
    out.verdict = Verdict::indeterminate;
    out.reason = "explicit radii carry no limit law";
  } else {
    out.verdict = Verdict::interpolating;
    out.reason = "Carleson condition holds and every boundary sum converges";
  }
  if (out.almost_sure) out.reason += " (almost surely, random angles)";
  return out;
}

bool pick_feasible(const PickProblem& p) {
  if (p.targets.size() != p.nodes.size()) throw DomainError("pick_feasible: targets and nodes differ in length");
  if (!(p.scale >= 0.0) || !std::isfinite(p.scale)) throw DomainError("pick_feasible: scale must be finite and >= 0");
  if (p.nodes.empty()) return true;
  double wmax = 0.0;
  for (Complex w : p.targets) wmax = std::max(wmax, std::abs(require_finite(w, "pick_feasible")));
  const double scale = std::max(p.scale * p.scale, wmax * wmax);
  if (scale == 0.0) return true;
  return is_psd(pick_matrix(p.nodes, p.targets, p.scale), scale);
}

SchurInterpolant::SchurInterpolant(std::vector<Complex> nodes, std::vector<Complex> params, double scale)
    : nodes_(std::move(nodes)), params_(std::move(params)), scale_(scale) {
  if (nodes_.size() != params_.size()) throw DomainError("SchurInterpolant: nodes and parameters differ in length");
}

Complex SchurInterpolant::operator()(Complex z) const {
  if (nodes_.empty()) return 0.0;
  Complex s = params_.back();
  for (std::size_t k = nodes_.size() - 1; k-- > 0;) {
    const Complex phi_s = (z - nodes_[k]) / one_minus_conj_prod(nodes_[k], z) * s;
    s = (params_[k] + phi_s) / (1.0 + std::conj(params_[k]) * phi_s);
  }
  return scale_ * s;
}

RationalFn SchurInterpolant::to_rational() const {
  if (nodes_.empty()) return RationalFn::constant(0.0);
  // M <- M [[p_k, g_k q_k], [conj(g_k) p_k, q_k]]; the last link is the constant.
  ComplexPoly m11 = ComplexPoly::constant(1.0), m12, m21, m22 = ComplexPoly::constant(1.0);
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    const Complex g = params_[k];
    const ComplexPoly p{-nodes_[k], 1.0}, q{1.0, -std::conj(nodes_[k])};
    const ComplexPoly n11 = m11 * p + m12 * p * std::conj(g);
    const ComplexPoly n12 = m11 * q * g + m12 * q;
    const ComplexPoly n21 = m21 * p + m22 * p * std::conj(g);
    const ComplexPoly n22 = m21 * q * g + m22 * q;
    m11 = n11;
    m12 = n12;
    m21 = n21;
    m22 = n22;
  }
  const Complex last = params_.back();
  return RationalFn((m11 * last + m12) * Complex(scale_), m21 * last + m22);
}

PickBound np_bound(const DiskSequence& nodes, std::span<const Complex> targets) {
  if (targets.size() != nodes.size()) throw DomainError("np_solve: targets and nodes differ in length");
  if (nodes.empty()) return {};
  carleson_delta(nodes);  // rejects duplicates
  double lo = 0.0;
  for (Complex w : targets) lo = std::max(lo, std::abs(require_finite(w, "np_solve")));
  if (lo == 0.0) return {};

  const std::vector<Complex> w(targets.begin(), targets.end());
  auto feasible = [&](double t) { return pick_feasible({nodes, w, t}); };
  double t_star = lo;
  if (!feasible(lo)) {
    double hi = 2.0 * lo;
    for (int k = 0; !feasible(hi); ++k) {
      if (k > 200) throw NonConvergenceError("np_solve: no feasible bound found");
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > kBisectionTolerance * hi) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    t_star = hi;
  }

  PickBound out;
  out.t_star = t_star;
  for (double infl = kSolveInflation;; infl *= 10.0) {
    const double t = t_star * (1.0 + infl);
    std::vector<Complex> s(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) s[i] = w[i] / t;
    try {
      out.chain = SchurInterpolant(nodes.values(), schur_parameters(nodes.values(), std::move(s)), t);
      out.inflation = infl;
      break;
    } catch (const NonConvergenceError&) {
      if (infl >= kMaxInflation) throw;
    }
  }
  out.boundary_sup = circle_sup([&](Complex z) { return out.chain(z); });
  return out;
}

PickSolution np_solve(const DiskSequence& nodes, std::span<const Complex> targets) {
  const PickBound b = np_bound(nodes, targets);
  PickSolution out;
  out.t_star = b.t_star;
  out.inflation = b.inflation;
  if (b.t_star == 0.0) return out;
  out.f = b.chain.to_rational();
  out.boundary_sup = circle_sup([&](Complex z) { return out.f(z); });
  return out;
}

RationalFn add_point(const RationalFn& F, const RationalPair& pair, const BlaschkeProduct& b, UnitDiskPoint lambda0,
                     Complex v0) {
  const Complex l0 = lambda0.value();
  const Complex scale = pair.a(l0) * blaschke_eval(b, l0);
  if (std::abs(scale) < kAddPointGuard) throw DomainError("add_point: a(lambda0) B(lambda0) vanishes");
  const Complex c = (require_finite(v0, "add_point") - F(l0)) / scale;
  if (c == Complex(0.0)) return F;
  return F + c * (pair.a * blaschke_to_rational(b));
}

InterpolantCertificate construct_multiplier(const RationalPair& pair, const DiskSequence& seq,
                                            std::span<const Complex> values) {
  if (values.size() != seq.size()) throw DomainError("construct_multiplier: values and nodes differ in length");
  if (seq.empty()) throw DomainError("construct_multiplier: empty sequence");
  carleson_delta(seq);
  for (Complex v : values) require_finite(v, "construct_multiplier");

  const BlaschkeProduct b_all{seq};
  const auto b_series = AnalyticSeries::from_blaschke(b_all);
  const ComplexPoly pn = hermite_poly(b_series, pair.zeros);
  for (const auto& z : pair.zeros.zeros())
    if (std::abs(std::abs(pn(z.zeta.value())) - 1.0) > kUnimodularTolerance)
      throw DomainError("construct_multiplier: |p_N| is not 1 at a boundary zero");

  std::vector<Complex> pn_roots, eta;
  if (pn.degree() >= 1) pn_roots = poly_roots(pn);
  for (Complex r : pn_roots)
    if (std::abs(std::abs(r) - 1.0) <= kPnZeroTolerance) eta.push_back(r / std::abs(r));
  double delta = std::numeric_limits<double>::infinity();
  for (Complex e : eta)
    for (const auto& z : pair.zeros.zeros()) delta = std::min(delta, std::abs(e - z.zeta.value()));

  // Split the nodes: on zeros of p_N (Lambda_0), near boundary zeros of p_N
  // (Lambda_1), and the rest (Lambda_2).
  std::vector<UnitDiskPoint> l0, l1, l2;
  std::vector<Complex> v0, v1, v2;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Complex l = seq[i].value();
    bool on_zero = false;
    for (Complex r : pn_roots) on_zero = on_zero || std::abs(l - r) <= kPnZeroTolerance;
    double near = std::numeric_limits<double>::infinity();
    for (Complex e : eta) near = std::min(near, std::abs(l - e));
    if (on_zero) {
      l0.push_back(seq[i]);
      v0.push_back(values[i]);
    } else if (near < delta / 2.0) {
      l1.push_back(seq[i]);
      v1.push_back(values[i]);
    } else {
      l2.push_back(seq[i]);
      v2.push_back(values[i]);
    }
  }

  const ComplexPoly a0 = pair.zeros.a0();
  RationalFn h = RationalFn::constant(0.0);
  if (!l1.empty()) {
    std::vector<Complex> t1(l1.size());
    for (std::size_t i = 0; i < l1.size(); ++i) t1[i] = v1[i] / a0(l1[i].value());
    h = RationalFn::polynomial(a0) * np_solve(DiskSequence(l1), t1).f;
  }
  const RationalFn b1 = blaschke_rational(l1);

  RationalFn F = h;
  if (!l2.empty()) {
    std::vector<Complex> u(l2.size());
    for (std::size_t i = 0; i < l2.size(); ++i) {
      const Complex l = l2[i].value();
      u[i] = -(v2[i] - h(l)) / (b1(l) * pn(l));
    }
    const RationalFn f1 = np_solve(DiskSequence(l2), u).f;
    if (!f1.is_zero()) F = b1 * ((blaschke_to_rational(b_all) - RationalFn::polynomial(pn)) * f1) + h;
  }

  // Lambda_0 through the add-a-point formula, one node at a time.
  std::vector<UnitDiskPoint> placed = l1;
  placed.insert(placed.end(), l2.begin(), l2.end());
  for (std::size_t i = 0; i < l0.size(); ++i) {
    F = add_point(F, pair, BlaschkeProduct{DiskSequence(placed)}, l0[i], v0[i]);
    placed.push_back(l0[i]);
  }

  InterpolantCertificate out{F, 0.0, {}, decompose(AnalyticSeries::from_rational(F), pair.zeros), l0.size(), l1.size()};
  for (std::size_t i = 0; i < seq.size(); ++i) out.value_residuals.push_back(std::abs(F(seq[i].value()) - values[i]));
  out.boundary_sup = circle_sup([&](Complex z) { return F(z); });
  return out;
}

}  // namespace hbinterp
