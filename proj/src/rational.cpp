#include "hbinterp/rational.hpp"

#include <algorithm>
#include <limits>

namespace hbinterp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double abs_eval_bound(const ComplexPoly& p, double r) {
  double acc = 0.0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

struct Factorization {
  ComplexPoly s;
  std::vector<RootCluster> boundary;  // roots of s on the circle, halved multiplicity
};

Factorization fejer_riesz_detail(std::span<const Complex> laurent) {
  if (laurent.empty() || laurent.size() % 2 == 0)
    throw DomainError("fejer_riesz: expected 2d + 1 Laurent coefficients");
  int d = static_cast<int>(laurent.size() / 2);
  double scale = 0.0;
  for (Complex c : laurent) {
    require_finite(c, "fejer_riesz");
    scale = std::max(scale, std::abs(c));
  }
  if (scale == 0.0) throw DomainError("fejer_riesz: R is identically zero");
  auto coef = [&](int k) { return laurent[static_cast<std::size_t>(k + static_cast<int>(laurent.size() / 2))]; };
  for (int k = 0; k <= d; ++k)
    if (std::abs(coef(-k) - std::conj(coef(k))) > 1e-12 * scale)
      throw DomainError("fejer_riesz: coefficients are not Hermitian (c_{-k} != conj(c_k))");

  // Real trigonometric polynomial on the grid, using the averaged coefficients.
  const int grid = kDefaultCircleGrid;
  std::vector<double> r_vals(grid);
  for (int i = 0; i < grid; ++i) {
    const Complex z = std::polar(1.0, 2.0 * kPi * i / grid);
    Complex acc = 0.0;
    for (int k = d; k >= 1; --k) acc = (acc + 0.5 * (coef(k) + std::conj(coef(-k)))) * z;
    r_vals[i] = coef(0).real() + 2.0 * acc.real();
    if (r_vals[i] < -1e-12 * std::max(1.0, scale))
      throw DomainError("fejer_riesz: trigonometric polynomial is negative on the circle");
  }

  while (d > 0 && std::abs(coef(d)) <= 1e-14 * scale) --d;
  if (d == 0) {
    if (!(coef(0).real() > 0.0)) throw DomainError("fejer_riesz: R is not positive");
    return {ComplexPoly::constant(std::sqrt(coef(0).real())), {}};
  }

  std::vector<Complex> pc(2 * d + 1);
  for (int k = -d; k <= d; ++k) pc[k + d] = coef(k);
  const auto clusters = find_roots(ComplexPoly(std::move(pc)));

  std::vector<Complex> chosen;
  std::vector<RootCluster> boundary;
  for (const auto& c : clusters) {
    const double mod = std::abs(c.value);
    if (std::abs(1.0 - mod) <= kBoundaryRootTolerance) {
      if (c.multiplicity % 2 != 0)
        throw DomainError("fejer_riesz: odd multiplicity root on the unit circle (R changes sign)");
      const Complex w = c.value / mod;
      boundary.push_back({w, c.multiplicity / 2});
      for (int k = 0; k < c.multiplicity / 2; ++k) chosen.push_back(w);
    } else if (mod > 1.0) {
      for (int k = 0; k < c.multiplicity; ++k) chosen.push_back(c.value);
    }
  }
  if (static_cast<int>(chosen.size()) != d)
    throw DomainError("fejer_riesz: root pairing failed (roots not symmetric about the circle)");

  const ComplexPoly monic = ComplexPoly::from_roots(chosen);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < grid; ++i) {
    num += r_vals[i];
    den += std::norm(monic(std::polar(1.0, 2.0 * kPi * i / grid)));
  }
  return {monic * Complex(std::sqrt(num / den)), boundary};
}

// |q|^2 - |p|^2 on the circle as Laurent coefficients c_{-d}..c_d.
std::vector<Complex> defect_laurent(const ComplexPoly& p, const ComplexPoly& q) {
  const int d = std::max(p.degree(), q.degree());
  std::vector<Complex> c(2 * d + 1, Complex(0.0));
  for (int k = -d; k <= d; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j <= d; ++j) {
      if (j + k < 0) continue;
      acc += q.coeff(j + k) * std::conj(q.coeff(j)) - p.coeff(j + k) * std::conj(p.coeff(j));
    }
    c[k + d] = acc;
  }
  return c;
}

}  // namespace

RationalFn::RationalFn(ComplexPoly num, ComplexPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("RationalFn: zero denominator");
  pole_radius_ = kInf;
  if (den_.degree() >= 1) {
    auto roots = find_roots(den_);
    std::vector<Complex> kept;
    for (const auto& c : roots) {
      int m = c.multiplicity;
      while (m > 0 && !num_.is_zero() &&
             std::abs(num_(c.value)) <= 1e-10 * abs_eval_bound(num_, std::abs(c.value))) {
        num_ = num_.divide_linear(c.value).quotient;
        den_ = den_.divide_linear(c.value).quotient;
        --m;
      }
      for (int k = 0; k < m; ++k) kept.push_back(c.value);
    }
    for (Complex r : kept) {
      if (std::abs(r) <= 1.0 + kPoleMargin)
        throw DomainError("RationalFn: denominator has a root in the closed unit disk");
      pole_radius_ = std::min(pole_radius_, std::abs(r));
    }
  }
  if (num_.is_zero()) den_ = ComplexPoly::constant(1.0);
}

Complex RationalFn::operator()(Complex z) const {
  const Complex d = den_(z);
  if (std::abs(d) <= kPoleGuard * abs_eval_bound(den_, std::abs(z)))
    throw PoleProximityError("RationalFn: evaluation point within guard of a pole");
  return num_(z) / d;
}

RationalFn operator*(const RationalFn& l, const RationalFn& r) { return {l.num_ * r.num_, l.den_ * r.den_}; }

RationalFn operator+(const RationalFn& l, const RationalFn& r) {
  if (l.den_ == r.den_) return {l.num_ + r.num_, l.den_};
  return {l.num_ * r.den_ + r.num_ * l.den_, l.den_ * r.den_};
}

RationalFn operator-(const RationalFn& l, const RationalFn& r) { return l + Complex(-1.0) * r; }

RationalFn operator*(Complex s, const RationalFn& r) {
  if (s == Complex(0.0)) return RationalFn::constant(0.0);
  return {r.num_ * s, r.den_, r.pole_radius_, RationalFn::Unchecked{}};
}

RationalFn blaschke_to_rational(const BlaschkeProduct& b) {
  ComplexPoly num = ComplexPoly::constant(1.0);
  ComplexPoly den = ComplexPoly::constant(1.0);
  for (const auto& pt : b.zeros.points()) {
    const Complex l = pt.value();
    if (l == Complex(0.0)) {
      num = num * ComplexPoly{0.0, 1.0};
    } else {
      const Complex unit = std::abs(l) / l;
      num = num * ComplexPoly{unit * l, -unit};
      den = den * ComplexPoly{1.0, -std::conj(l)};
    }
  }
  return {num, den};
}

double circle_sup(const std::function<Complex(Complex)>& f, int grid) {
  if (grid < 16) throw DomainError("circle_sup: grid must have at least 16 points");
  const double h = 2.0 * kPi / grid;
  std::vector<double> v(grid);
  for (int i = 0; i < grid; ++i) v[i] = std::abs(f(std::polar(1.0, h * i)));

  std::vector<int> peaks;
  for (int i = 0; i < grid; ++i)
    if (v[i] >= v[(i + grid - 1) % grid] && v[i] >= v[(i + 1) % grid]) peaks.push_back(i);
  std::sort(peaks.begin(), peaks.end(), [&](int l, int r) { return v[l] > v[r]; });
  if (peaks.size() > 8) peaks.resize(8);

  double best = *std::max_element(v.begin(), v.end());
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto at = [&](double t) { return std::abs(f(std::polar(1.0, t))); };
  for (int i : peaks) {
    double lo = h * (i - 1), hi = h * (i + 1);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = at(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = at(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

BoundaryZeroSet::BoundaryZeroSet(std::vector<BoundaryZero> zeros) : zeros_(std::move(zeros)) {
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    if (zeros_[i].multiplicity < 1) throw DomainError("BoundaryZeroSet: multiplicities must be >= 1");
    for (std::size_t j = i + 1; j < zeros_.size(); ++j)
      if (std::abs(zeros_[i].zeta.value() - zeros_[j].zeta.value()) <= 1e-8)
        throw DomainError("BoundaryZeroSet: boundary zeros must be pairwise distinct");
  }
}

int BoundaryZeroSet::total_multiplicity() const {
  int n = 0;
  for (const auto& z : zeros_) n += z.multiplicity;
  return n;
}

int BoundaryZeroSet::max_multiplicity() const {
  int m = 0;
  for (const auto& z : zeros_) m = std::max(m, z.multiplicity);
  return m;
}

ComplexPoly BoundaryZeroSet::a0() const {
  std::vector<Complex> roots;
  for (const auto& z : zeros_)
    for (int k = 0; k < z.multiplicity; ++k) roots.push_back(z.zeta.value());
  return ComplexPoly::from_roots(roots);
}

ComplexPoly fejer_riesz(std::span<const Complex> laurent) { return fejer_riesz_detail(laurent).s; }

RationalPair pythagorean_mate(const RationalFn& b, const MateOptions& opts) {
  const double sup = circle_sup([&](Complex z) { return b(z); }, opts.grid);
  if (sup > 1.0 + opts.sup_tolerance)
    throw DomainError("pythagorean_mate: sup|b| on the circle exceeds 1");
  if (sup < 1.0 - opts.sup_tolerance)
    throw DomainError("pythagorean_mate: sup|b| on the circle must equal 1");

  const auto f = fejer_riesz_detail(defect_laurent(b.num(), b.den()));
  if (f.boundary.empty()) throw DomainError("pythagorean_mate: mate has no zero on the circle");

  const Complex a_at_0 = f.s(0.0) / b.den()(0.0);
  const Complex phase = std::conj(a_at_0) / std::abs(a_at_0);
  RationalFn a(f.s * phase, b.den());

  std::vector<BoundaryZero> zs;
  for (const auto& c : f.boundary) zs.push_back({UnitCirclePoint(c.value), c.multiplicity});
  BoundaryZeroSet zeros(std::move(zs));
  const int n = zeros.total_multiplicity();
  const int m = zeros.max_multiplicity();
  return {b, std::move(a), std::move(zeros), n, m};
}

RationalPair pair_from_boundary_zeros(const BoundaryZeroSet& zeros, const MateOptions& opts) {
  if (zeros.empty()) throw DomainError("pair_from_boundary_zeros: need at least one boundary zero");
  const ComplexPoly a0 = zeros.a0();
  const double kappa = 1.0 / circle_sup([&](Complex z) { return a0(z); }, opts.grid);
  // The mate of kappa*a0 has sup 1 and its own mate is kappa*a0 up to phase.
  const RationalPair swapped = pythagorean_mate(RationalFn::polynomial(a0 * Complex(kappa)), opts);
  RationalPair pair = pythagorean_mate(swapped.a, opts);

  for (const auto& want : zeros.zeros()) {
    bool found = false;
    for (const auto& got : pair.zeros.zeros())
      if (std::abs(got.zeta.value() - want.zeta.value()) <= 1e-6 && got.multiplicity == want.multiplicity)
        found = true;
    if (!found || pair.zeros.size() != zeros.size())
      throw NonConvergenceError("pair_from_boundary_zeros: recovered zero set does not match the request");
  }
  const Complex c0 = a0(0.0);
  pair.a = RationalFn::polynomial(a0 * (kappa * std::conj(c0) / std::abs(c0)));
  pair.zeros = zeros;
  pair.N = zeros.total_multiplicity();
  pair.M = zeros.max_multiplicity();
  return pair;
}

PairReport verify_pair(const RationalPair& pair, int grid_size, double tol) {
  if (grid_size < 16) throw DomainError("verify_pair: grid_size must be >= 16");
  PairReport r;
  for (int i = 0; i < grid_size; ++i) {
    const Complex z = std::polar(1.0, 2.0 * kPi * i / grid_size);
    const double av = std::abs(pair.a(z)), bv = std::abs(pair.b(z));
    r.max_residual = std::max(r.max_residual, std::abs(av * av + bv * bv - 1.0));
    r.a_sup = std::max(r.a_sup, av);
    r.b_sup = std::max(r.b_sup, bv);
  }
  r.min_num_root_modulus = kInf;
  if (pair.a.num().degree() >= 1)
    for (Complex w : poly_roots(pair.a.num())) r.min_num_root_modulus = std::min(r.min_num_root_modulus, std::abs(w));
  r.outer = !pair.a.is_zero() && r.min_num_root_modulus >= 1.0 - kPoleMargin;
  const Complex a_at_0 = pair.a(0.0);
  r.a0_positive = a_at_0.real() > 0.0 && std::abs(a_at_0.imag()) <= 1e-12 * std::max(1.0, a_at_0.real());
  r.pass = r.max_residual <= tol && r.outer && r.a0_positive;
  return r;
}

double corona_lower_bound(const RationalPair& pair, const DiskGrid& grid) {
  if (grid.radial < 2 || grid.angular < 1 || !(grid.r_max > 0.0 && grid.r_max < 1.0))
    throw DomainError("corona_lower_bound: invalid disk grid");
  double best = kInf;
  for (int i = 0; i < grid.radial; ++i) {
    const double r = grid.r_max * i / (grid.radial - 1);
    for (int j = 0; j < grid.angular; ++j) {
      const Complex z = std::polar(r, 2.0 * kPi * j / grid.angular);
      best = std::min(best, std::norm(pair.a(z)) + std::norm(pair.b(z)));
      if (i == 0) break;
    }
  }
  return best;
}

}  // namespace hbinterp
