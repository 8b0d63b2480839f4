#include "hbinterp/hb_space.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hbinterp {

namespace {

constexpr double kCoeffCutoff = 1e-18;
constexpr std::size_t kMaxCoefficients = std::size_t{1} << 22;

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// First `count` Taylor coefficients of num/den, both given in the same variable.
std::vector<Complex> series_divide(const ComplexPoly& num, const ComplexPoly& den, int count) {
  const Complex d0 = den.coeff(0);
  std::vector<Complex> c(count);
  const int dd = den.degree();
  for (int k = 0; k < count; ++k) {
    Complex acc = num.coeff(k);
    for (int j = 1; j <= std::min(k, dd); ++j) acc -= den.coeff(j) * c[k - j];
    c[k] = acc / d0;
  }
  return c;
}

double max_abs(const ComplexPoly& p) { return p.max_abs_coeff(); }

const RationalFn& closed_form(const AnalyticSeries& f, const char* what) {
  if (!f.rational()) throw SingularityError(std::string(what) + ": series has no closed form to expand at the boundary");
  return *f.rational();
}

}  // namespace

AnalyticSeries AnalyticSeries::from_polynomial(ComplexPoly p) {
  AnalyticSeries s;
  s.coeffs_ = p.coeffs();
  s.source_ = SeriesSource::polynomial;
  s.rational_ = RationalFn::polynomial(std::move(p));
  return s;
}

AnalyticSeries AnalyticSeries::from_rational(RationalFn f) {
  AnalyticSeries s;
  s.source_ = SeriesSource::rational;
  const ComplexPoly& num = f.num();
  const ComplexPoly& den = f.den();
  const Complex d0 = den.coeff(0);
  const int dd = den.degree();
  const int window = std::max(8, 2 * dd + 2);
  const double ratio = std::isfinite(f.pole_radius()) ? 1.0 / f.pole_radius() : 0.0;

  std::vector<Complex>& c = s.coeffs_;
  double peak = 0.0;
  bool small_tail = false;
  for (std::size_t k = 0; k < kMaxCoefficients; ++k) {
    Complex acc = num.coeff(k);
    const std::size_t top = std::min<std::size_t>(k, static_cast<std::size_t>(std::max(dd, 0)));
    for (std::size_t j = 1; j <= top; ++j) acc -= den.coeff(j) * c[k - j];
    c.push_back(acc / d0);
    peak = std::max(peak, std::abs(c.back()));
    if (dd == 0 && static_cast<int>(k) >= num.degree()) {
      small_tail = true;
      break;
    }
    if (static_cast<int>(k) >= num.degree() + window) {
      double recent = 0.0;
      for (std::size_t j = k + 1 - static_cast<std::size_t>(window); j <= k; ++j) recent = std::max(recent, std::abs(c[j]));
      if (recent <= kCoeffCutoff * peak) {
        small_tail = true;
        break;
      }
    }
  }
  while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
  if (dd > 0) {
    double recent = 0.0;
    for (std::size_t j = c.size() > static_cast<std::size_t>(window) ? c.size() - window : 0; j < c.size(); ++j)
      recent = std::max(recent, std::abs(c[j]));
    // Geometric tail estimate with a safety factor for repeated poles.
    s.tail_bound_ = 4.0 * recent * ratio / std::sqrt(std::max(1.0 - ratio * ratio, 1e-300));
    if (small_tail) s.tail_bound_ = std::min(s.tail_bound_, std::max(recent, kCoeffCutoff * peak) * 1e3);
  }
  s.rational_ = std::move(f);
  return s;
}

AnalyticSeries AnalyticSeries::from_blaschke(BlaschkeProduct b) {
  AnalyticSeries s = from_rational(blaschke_to_rational(b));
  s.source_ = SeriesSource::blaschke;
  s.blaschke_ = std::move(b);
  return s;
}

AnalyticSeries AnalyticSeries::from_coefficients(std::vector<Complex> coeffs, double tail_bound) {
  if (!(tail_bound >= 0.0)) throw DomainError("AnalyticSeries: tail bound must be nonnegative");
  for (Complex z : coeffs) require_finite(z, "AnalyticSeries");
  AnalyticSeries s;
  s.coeffs_ = std::move(coeffs);
  s.tail_bound_ = tail_bound;
  return s;
}

Complex AnalyticSeries::operator()(Complex z) const {
  if (blaschke_) return blaschke_eval(*blaschke_, z);
  if (rational_) return (*rational_)(z);
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double AnalyticSeries::h2_norm() const {
  CompensatedSum s;
  for (Complex z : coeffs_) s.add(std::norm(z));
  return std::sqrt(s.value());
}

std::vector<Complex> AnalyticSeries::jet(Complex zeta, int count) const {
  if (count <= 0) return {};
  if (blaschke_) return blaschke_taylor(*blaschke_, zeta, count - 1);
  const RationalFn& f = closed_form(*this, "jet");
  const ComplexPoly den = f.den().shifted(zeta);
  if (std::abs(den.coeff(0)) <= kPoleGuard * max_abs(den)) throw SingularityError("jet: pole at the expansion point");
  return series_divide(f.num().shifted(zeta), den, count);
}

ComplexPoly hermite_poly(const AnalyticSeries& f, const BoundaryZeroSet& zeros) {
  std::vector<Complex> nodes;
  std::vector<std::vector<Complex>> jets;  // per node, the jet of its zero
  for (const auto& z : zeros.zeros()) {
    const auto j = f.jet(z.zeta.value(), z.multiplicity);
    for (int k = 0; k < z.multiplicity; ++k) {
      nodes.push_back(z.zeta.value());
      jets.push_back(j);
    }
  }
  const std::size_t n = nodes.size();
  if (n == 0) return {};

  // Divided-difference table, column by column; repeated nodes take jet values.
  std::vector<Complex> col(n), newton(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = jets[i][0];
  newton[0] = col[0];
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Complex> next(n);
    for (std::size_t i = k; i < n; ++i) {
      if (nodes[i] == nodes[i - k]) {
        next[i] = jets[i][k];
      } else {
        next[i] = (col[i] - col[i - 1]) / (nodes[i] - nodes[i - k]);
      }
    }
    col.swap(next);
    newton[k] = col[k];
  }

  ComplexPoly p, basis = ComplexPoly::constant(1.0);
  for (std::size_t k = 0; k < n; ++k) {
    p += basis * newton[k];
    basis = basis * ComplexPoly{-nodes[k], 1.0};
  }
  return p;
}

HbDecomposition decompose(const AnalyticSeries& f, const BoundaryZeroSet& zeros) {
  const RationalFn& rf = closed_form(f, "decompose");
  ComplexPoly p = hermite_poly(f, zeros);
  ComplexPoly rest = rf.num() - p * rf.den();
  const double scale = std::max({max_abs(rf.num()), max_abs(p * rf.den()), 1e-300});
  for (const auto& z : zeros.zeros()) {
    for (int k = 0; k < z.multiplicity; ++k) {
      const auto div = rest.divide_linear(z.zeta.value());
      if (std::abs(div.remainder) > 1e-9 * scale)
        throw DomainError("decompose: f - p does not vanish to the required order at a boundary zero");
      rest = div.quotient;
    }
  }
  return {AnalyticSeries::from_rational(RationalFn(rest, rf.den())), std::move(p), zeros.a0()};
}

HbNorm hb_norm(const HbDecomposition& d) {
  CompensatedSum s;
  for (Complex z : d.g.coeffs()) s.add(std::norm(z));
  for (Complex z : d.p.coeffs()) s.add(std::norm(z));
  return {std::sqrt(s.value()), d.g.tail_bound()};
}

double local_dirichlet_norm(const AnalyticSeries& f, UnitCirclePoint zeta, int n) {
  if (n < 1) throw DomainError("local_dirichlet_norm: order must be >= 1");
  const RationalFn& rf = closed_form(f, "local_dirichlet_norm");
  const Complex z0 = zeta.value();
  const ComplexPoly num = rf.num().shifted(z0);
  const ComplexPoly den = rf.den().shifted(z0);
  if (std::abs(den.coeff(0)) <= kPoleGuard * max_abs(den)) throw SingularityError("local_dirichlet_norm: pole at zeta");

  const ComplexPoly taylor(series_divide(num, den, n));
  const ComplexPoly td = taylor * den;
  const ComplexPoly r = num - td;
  const double scale = std::max({max_abs(num), max_abs(td), 1e-300});
  for (int k = 0; k < n; ++k)
    if (std::abs(r.coeff(k)) > 1e-9 * scale) throw DomainError("local_dirichlet_norm: Taylor remainder check failed");
  if (r.degree() < n) return 0.0;

  std::vector<Complex> q(r.coeffs().begin() + n, r.coeffs().end());
  const ComplexPoly qz = ComplexPoly(std::move(q)).shifted(-z0);
  const AnalyticSeries h = AnalyticSeries::from_rational(RationalFn(qz, rf.den()));
  const double norm = h.h2_norm();
  return norm * norm;
}

double dirichlet_blaschke_quadrature(const BlaschkeProduct& b, UnitCirclePoint zeta, int n, const QuadratureOptions& opts) {
  if (n < 1) throw DomainError("dirichlet_blaschke_quadrature: order must be >= 1");
  if (opts.initial_grid < 4 || opts.max_grid < opts.initial_grid)
    throw DomainError("dirichlet_blaschke_quadrature: invalid grid sizes");
  constexpr int kExtra = 60;
  const Complex z0 = zeta.value();
  const auto c = blaschke_taylor_at_boundary(b, zeta, n + kExtra);

  // Distance from zeta to the nearest pole bounds the Taylor disk.
  double pole_dist = std::numeric_limits<double>::infinity();
  for (const auto& pt : b.zeros.points())
    if (pt.value() != Complex(0.0)) pole_dist = std::min(pole_dist, std::abs(z0 - 1.0 / std::conj(pt.value())));
  const double near = std::min(pole_dist / 3.0, 0.5);

  auto integrand = [&](double theta) {
    const Complex w = z0 * std::polar(1.0, theta);
    const Complex h = w - z0;
    Complex v;
    if (std::abs(h) < near) {
      v = 0.0;
      for (int k = n + kExtra; k >= n; --k) v = v * h + c[k];
    } else {
      Complex t = 0.0;
      for (int k = n - 1; k >= 0; --k) t = t * h + c[k];
      v = (blaschke_eval(b, w) - t) / std::pow(h, n);
    }
    return std::norm(v);
  };

  auto sweep = [&](int m, double offset) {
    CompensatedSum s;
    for (int i = 0; i < m; ++i) s.add(integrand(2.0 * kPi * (i + offset) / m));
    return s.value() / m;
  };

  int m = opts.initial_grid;
  // Do not trust agreement before the grid resolves the nearest pole.
  const double resolve = std::isfinite(pole_dist) ? pole_dist / 2.0 : 1.0;
  double q = sweep(m, 0.0);
  while (true) {
    if (m >= opts.max_grid) break;
    const double refined = 0.5 * (q + sweep(m, 0.5));
    const double prev = q;
    q = refined;
    m *= 2;
    if (2.0 * kPi / m < resolve && std::abs(q - prev) <= opts.rel_tol * std::abs(q)) return q;
    if (m >= opts.max_grid) {
      throw NonConvergenceError("dirichlet_blaschke_quadrature: grid cap reached; last values " +
                                std::to_string(prev) + " and " + std::to_string(q));
    }
  }
  throw NonConvergenceError("dirichlet_blaschke_quadrature: grid cap reached at the initial grid");
}

IdentitySides dirichlet_product_identity(const AnalyticSeries& f, UnitDiskPoint lambda, UnitCirclePoint zeta, int n) {
  if (n < 1) throw DomainError("dirichlet_product_identity: order must be >= 1");
  const RationalFn& rf = closed_form(f, "dirichlet_product_identity");
  const Complex l = lambda.value();
  const RationalFn phi(ComplexPoly{-l, 1.0}, ComplexPoly{1.0, -std::conj(l)});
  IdentitySides out;
  out.lhs = local_dirichlet_norm(AnalyticSeries::from_rational(phi * rf), zeta, n);

  // Rotate zeta to 1: F(z) = f(zeta z), mu = conj(zeta) lambda.
  const Complex z0 = zeta.value();
  const Complex mu = std::conj(z0) * l;
  const Complex mub = std::conj(mu);
  const auto jet = f.jet(z0, n);
  Complex sum = 0.0, zpow = 1.0;
  for (int j = 0; j < n; ++j) {
    sum += jet[j] * zpow * std::pow(1.0 - mub, j) * std::pow(mub, n - 1 - j);
    zpow *= z0;
  }
  out.rhs = one_minus_abs2(mu) / std::pow(std::abs(1.0 - mu), 2 * n) * std::norm(sum) + local_dirichlet_norm(f, zeta, n);
  return out;
}

namespace {

// Data for the stable kernel form; see kernel_kb.
struct KernelForm {
  ComplexPoly p, s, q;
  Eigen::MatrixXcd h;

  explicit KernelForm(const RationalPair& pair) {
    if (pair.a.den() == pair.b.den()) {
      q = pair.b.den();
      p = pair.b.num();
      s = pair.a.num();
    } else {
      q = pair.a.den() * pair.b.den();
      p = pair.b.num() * pair.a.den();
      s = pair.a.num() * pair.b.den();
    }
    const int d = std::max({p.degree(), s.degree(), q.degree(), 0});
    Eigen::MatrixXcd e(d + 1, d + 1);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        e(i, j) = std::conj(q.coeff(i)) * q.coeff(j) - std::conj(p.coeff(i)) * p.coeff(j) -
                  std::conj(s.coeff(i)) * s.coeff(j);
    h = Eigen::MatrixXcd::Zero(std::max(d, 1), std::max(d, 1));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int t = 0; t <= std::min(i, j); ++t) h(i, j) += e(i - t, j - t);
  }

  Complex operator()(Complex w, Complex z) const {
    const Complex qw = q(w), qz = q(z);
    const Complex aw = s(w) / qw, az = s(z) / qz;
    const Eigen::Index d = h.rows();
    Eigen::VectorXcd vw(d), vz(d);
    Complex pw = 1.0, pz = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      vw(k) = pw;
      vz(k) = pz;
      pw *= w;
      pz *= z;
    }
    const Complex quad = vw.adjoint() * h * vz;
    return std::conj(aw) * az / one_minus_conj_prod(w, z) + quad / (std::conj(qw) * qz);
  }
};

}  // namespace

Complex kernel_kb(const RationalPair& pair, UnitDiskPoint w, UnitDiskPoint z) {
  return KernelForm(pair)(w.value(), z.value());
}

Complex kernel_kb_direct(const RationalPair& pair, UnitDiskPoint w, UnitDiskPoint z) {
  return (1.0 - std::conj(pair.b(w.value())) * pair.b(z.value())) / one_minus_conj_prod(w.value(), z.value());
}

GramReport gram(const RationalPair& pair, const DiskSequence& seq) {
  const std::size_t n = seq.size();
  if (n == 0) throw DomainError("gram: empty sequence");
  if (n > 4096) throw DomainError("gram: sequence larger than the 4096 size cap");
  const KernelForm k(pair);
  Eigen::MatrixXcd g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = k(seq[i].value(), seq[j].value());
      g(j, i) = std::conj(g(i, j));
    }
  GramReport out;
  out.diag_norms.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.diag_norms[i] = std::sqrt(g(i, i).real());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) /= out.diag_norms[i] * out.diag_norms[j];
    g(i, i) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  out.min_eig = es.eigenvalues().minCoeff();
  out.max_eig = es.eigenvalues().maxCoeff();
  out.matrix = std::move(g);
  return out;
}

AnalyticSeries toeplitz_apply(const ComplexPoly& a, const AnalyticSeries& g) {
  const auto& gc = g.coeffs();
  std::vector<Complex> out(gc.size(), Complex(0.0));
  double a_l1 = 0.0;
  for (Complex c : a.coeffs()) a_l1 += std::abs(c);
  for (std::size_t k = 0; k < gc.size(); ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < a.coeffs().size() && k + j < gc.size(); ++j) acc += std::conj(a.coeff(j)) * gc[k + j];
    out[k] = acc;
  }
  return AnalyticSeries::from_coefficients(std::move(out), a_l1 * g.tail_bound());
}

struct ToeplitzSection::Impl {
  Eigen::MatrixXcd u;
  Eigen::VectorXd sigma;
};

ToeplitzSection::ToeplitzSection(const ComplexPoly& a, int truncation) : truncation_(truncation) {
  if (a.is_zero()) throw DomainError("ToeplitzSection: zero symbol");
  if (truncation < a.degree() + 1) throw DomainError("ToeplitzSection: truncation must be >= deg a + 1");
  const int m = truncation + 1;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j <= a.degree() && k + j < m; ++j) t(k, k + j) = std::conj(a.coeff(j));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(t, Eigen::ComputeThinU);
  impl_ = std::make_unique<Impl>(Impl{svd.matrixU(), svd.singularValues()});
}

ToeplitzSection::~ToeplitzSection() = default;
ToeplitzSection::ToeplitzSection(ToeplitzSection&&) noexcept = default;
ToeplitzSection& ToeplitzSection::operator=(ToeplitzSection&&) noexcept = default;

RangeResidual ToeplitzSection::residual(const AnalyticSeries& f, const RangeOptions& opts) const {
  const int m = truncation_ + 1;
  Eigen::VectorXcd fv(m);
  for (int k = 0; k < m; ++k) fv(k) = f.coeff(k);
  const Eigen::VectorXcd beta = impl_->u.adjoint() * fv;
  const Eigen::VectorXd& sigma = impl_->sigma;
  const double smax = sigma.maxCoeff();
  const double tol = 1e-12 * smax;

  RangeResidual out;
  out.truncation = truncation_;
  const double fnorm = fv.norm();
  out.budget = opts.budget_factor * fnorm;

  CompensatedSum pre, lost;
  for (int i = 0; i < m; ++i) {
    if (sigma(i) > tol) {
      pre.add(std::norm(beta(i)) / (sigma(i) * sigma(i)));
    } else {
      out.rank_deficient = true;
      lost.add(std::norm(beta(i)));
    }
  }
  out.preimage_norm = std::sqrt(pre.value());
  if (fnorm == 0.0) return out;
  if (out.preimage_norm <= out.budget) {
    out.residual = std::sqrt(lost.value());
    return out;
  }

  // Budget active: find mu with ||g(mu)|| = budget, g(mu) = sum sigma beta/(sigma^2 + mu).
  auto gnorm2 = [&](double mu) {
    CompensatedSum s;
    for (int i = 0; i < m; ++i) s.add(sigma(i) * sigma(i) * std::norm(beta(i)) / std::pow(sigma(i) * sigma(i) + mu, 2));
    return s.value();
  };
  const double target = out.budget * out.budget;
  double hi = smax * fnorm / out.budget;
  double lo = hi * 1e-30;
  while (gnorm2(lo) < target && lo > 1e-300) lo *= 1e-10;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (gnorm2(mid) > target ? lo : hi) = mid;
    if (hi / lo < 1.0 + 1e-12) break;
  }
  const double mu = std::sqrt(lo * hi);
  CompensatedSum r;
  for (int i = 0; i < m; ++i) r.add(std::norm(beta(i)) * std::pow(mu / (sigma(i) * sigma(i) + mu), 2));
  out.residual = std::sqrt(r.value());
  return out;
}

RangeResidual range_membership_residual(const ComplexPoly& a, const AnalyticSeries& f, int truncation,
                                        const RangeOptions& opts) {
  return ToeplitzSection(a, truncation).residual(f, opts);
}

std::vector<RangeResidual> range_membership_curve(const ComplexPoly& a, const AnalyticSeries& f,
                                                  std::span<const int> truncations, const RangeOptions& opts) {
  std::vector<RangeResidual> out;
  for (int t : truncations) out.push_back(range_membership_residual(a, f, t, opts));
  return out;
}

}  // namespace hbinterp
