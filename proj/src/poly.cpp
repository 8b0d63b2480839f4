#include "hbinterp/poly.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hbinterp {

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  for (Complex z : c_) require_finite(z, "ComplexPoly");
  trim();
}

void ComplexPoly::trim() {
  while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
}

ComplexPoly ComplexPoly::monomial(int k, Complex c) {
  std::vector<Complex> v(k + 1, Complex(0.0));
  v[k] = c;
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::from_roots(std::span<const Complex> roots, Complex lead) {
  std::vector<Complex> c{lead};
  for (Complex r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return ComplexPoly(std::move(c));
}

double ComplexPoly::max_abs_coeff() const {
  double m = 0.0;
  for (Complex z : c_) m = std::max(m, std::abs(z));
  return m;
}

Complex ComplexPoly::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPoly ComplexPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::trimmed(double rel_tol) const {
  const double cut = rel_tol * max_abs_coeff();
  std::vector<Complex> v = c_;
  while (!v.empty() && std::abs(v.back()) <= cut) v.pop_back();
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::shifted(Complex c) const {
  std::vector<Complex> a = c_;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) a[k - 1] += c * a[k];
  return ComplexPoly(std::move(a));
}

ComplexPoly::LinearDivision ComplexPoly::divide_linear(Complex root) const {
  if (c_.empty()) return {ComplexPoly{}, 0.0};
  const std::size_t n = c_.size();
  std::vector<Complex> q(n - 1);
  Complex carry = c_[n - 1];
  for (std::size_t k = n - 1; k > 0; --k) {
    q[k - 1] = carry;
    carry = c_[k - 1] + root * carry;
  }
  return {ComplexPoly(std::move(q)), carry};
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Complex(0.0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Complex(0.0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator*=(Complex s) {
  for (Complex& z : c_) z *= s;
  trim();
  return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Complex> c(a.c_.size() + b.c_.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return ComplexPoly(std::move(c));
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Newton quotient p(z)/p'(z) plus a flag telling whether |p(z)| is already at
// the rounding level. Points outside the unit circle are handled through the
// reversed polynomial so that Horner stays stable.
struct NewtonStep {
  Complex ratio;
  bool at_rounding_level = false;
  double log_abs_p = 0.0;  // log(|p(z)| + rounding bound)
};

NewtonStep newton_step(const std::vector<Complex>& a, Complex z) {
  const int n = static_cast<int>(a.size()) - 1;
  NewtonStep out;
  if (std::abs(z) <= 1.0) {
    Complex p = a[n], dp = 0.0;
    double bound = std::abs(a[n]);
    const double az = std::abs(z);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[k];
      bound = bound * az + std::abs(a[k]);
    }
    const double err = 4.0 * (n + 1) * kEps * bound;
    out.at_rounding_level = std::abs(p) <= err;
    out.ratio = dp == Complex(0.0) ? Complex(0.0) : p / dp;
    out.log_abs_p = std::log(std::abs(p) + err);
    return out;
  }
  const Complex y = 1.0 / z;
  Complex q = a[0], dq = 0.0;
  double bound = std::abs(a[0]);
  const double ay = std::abs(y);
  for (int k = 1; k <= n; ++k) {
    dq = dq * y + q;
    q = q * y + a[k];
    bound = bound * ay + std::abs(a[k]);
  }
  const double err = 4.0 * (n + 1) * kEps * bound;
  out.at_rounding_level = std::abs(q) <= err;
  const Complex den = static_cast<double>(n) * q - y * dq;
  out.ratio = den == Complex(0.0) ? Complex(0.0) : z * q / den;
  out.log_abs_p = n * std::log(std::abs(z)) + std::log(std::abs(q) + err);
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
  void unite(int i, int j) { parent[find(i)] = find(j); }
};

std::vector<Complex> aberth(const std::vector<Complex>& a, const RootOptions& opts) {
  const int n = static_cast<int>(a.size()) - 1;
  // Initial guesses on a circle of radius |a0/an|^(1/n), rotated off the axes.
  const double radius = std::pow(std::abs(a[0]) / std::abs(a[n]), 1.0 / n);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2.0 * kPi * k / n + 0.4);

  std::vector<bool> done(n, false);
  for (int it = 0; it < opts.max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const NewtonStep s = newton_step(a, z[i]);
      if (s.at_rounding_level) {
        done[i] = true;
        continue;
      }
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        Complex d = z[i] - z[j];
        if (d == Complex(0.0)) d = kEps * (1.0 + std::abs(z[i]));
        sum += 1.0 / d;
      }
      const Complex w = s.ratio / (1.0 - s.ratio * sum);
      z[i] -= w;
      if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) return z;
  }
  for (int i = 0; i < n; ++i)
    if (!done[i] && !newton_step(a, z[i]).at_rounding_level)
      throw NonConvergenceError("find_roots: Aberth iteration did not converge within the iteration cap");
  return z;
}

}  // namespace

std::vector<RootCluster> find_roots(const ComplexPoly& p, const RootOptions& opts) {
  if (p.degree() < 1) throw DomainError("find_roots: degree must be >= 1");

  // Exact roots at the origin.
  const auto& all = p.coeffs();
  std::size_t zeros_at_origin = 0;
  while (all[zeros_at_origin] == Complex(0.0)) ++zeros_at_origin;
  std::vector<Complex> a(all.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin), all.end());
  const int n = static_cast<int>(a.size()) - 1;

  std::vector<RootCluster> out;
  if (zeros_at_origin > 0) out.push_back({0.0, static_cast<int>(zeros_at_origin)});
  if (n == 0) return out;
  if (n == 1) {
    out.push_back({-a[0] / a[1], 1});
    return out;
  }

  const std::vector<Complex> z = aberth(a, opts);

  // Inclusion radii n |p(z_i)| / |a_n prod_{j != i} (z_i - z_j)|, with the
  // rounding bound added so that multiple-root approximations overlap.
  std::vector<double> radius(n);
  const double log_lead = std::log(std::abs(a[n]));
  for (int i = 0; i < n; ++i) {
    double log_prod = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) log_prod += std::log(std::max(std::abs(z[i] - z[j]), std::numeric_limits<double>::min()));
    radius[i] = std::exp(std::log(static_cast<double>(n)) + newton_step(a, z[i]).log_abs_p - log_lead - log_prod);
  }

  UnionFind uf(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(z[i] - z[j]);
      const double cap = 0.05 * std::max(1.0, std::abs(z[i]));
      if (d <= opts.cluster_radius * std::max(1.0, std::abs(z[i])) || (d <= radius[i] + radius[j] && d <= cap))
        uf.unite(i, j);
    }
  }

  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);

  const ComplexPoly reduced(a);
  for (const auto& g : groups) {
    if (g.empty()) continue;
    Complex c = 0.0;
    for (int i : g) c += z[i];
    c /= static_cast<double>(g.size());
    const int m = static_cast<int>(g.size());
    if (m > 1) {
      // The centroid is well conditioned; polish it as a simple root of p^(m-1).
      double spread = 0.0;
      for (int i : g) spread = std::max(spread, std::abs(z[i] - c));
      ComplexPoly d = reduced;
      for (int k = 0; k < m - 1; ++k) d = d.derivative();
      const ComplexPoly dd = d.derivative();
      Complex x = c;
      for (int it = 0; it < 8; ++it) {
        const Complex fx = d(x), dfx = dd(x);
        if (dfx == Complex(0.0)) break;
        const Complex step = fx / dfx;
        x -= step;
        if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(x))) break;
      }
      if (is_finite(x) && std::abs(x - c) <= std::max(spread, 1e-12)) c = x;
    }
    out.push_back({c, m});
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& l, const RootCluster& r) {
    if (l.value.real() != r.value.real()) return l.value.real() < r.value.real();
    return l.value.imag() < r.value.imag();
  });
  return out;
}

std::vector<Complex> poly_roots(const ComplexPoly& p, const RootOptions& opts) {
  std::vector<Complex> out;
  for (const auto& c : find_roots(p, opts))
    for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.value);
  return out;
}

}  // namespace hbinterp
