#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hbinterp/rational.hpp"
#include "support.hpp"

using namespace hbinterp;
using hbtest::Gen;

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Max deviation of |s|^2 from R on the grid, relative to sup R.
double grid_rel_error(const ComplexPoly& s, std::span<const Complex> laurent) {
  const int d = static_cast<int>(laurent.size() / 2);
  double worst = 0.0, peak = 0.0;
  std::vector<double> rv(4096), sv(4096);
  for (int i = 0; i < 4096; ++i) {
    const double t = 2.0 * kPi * i / 4096;
    double r = 0.0;
    for (int k = -d; k <= d; ++k) r += (laurent[k + d] * std::polar(1.0, k * t)).real();
    rv[i] = r;
    sv[i] = std::norm(s(std::polar(1.0, t)));
    peak = std::max(peak, std::abs(r));
  }
  for (int i = 0; i < 4096; ++i) worst = std::max(worst, std::abs(sv[i] - rv[i]) / peak);
  return worst;
}

double residual_scale(const ComplexPoly& p, Complex z) {
  return p.max_abs_coeff() * std::pow(std::max(1.0, std::abs(z)), p.degree());
}

RationalPair worked_pair() {
  return pythagorean_mate(RationalFn::polynomial(ComplexPoly{0.25, -0.5, 0.25}));
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const ComplexPoly p{1.0, 2.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(ComplexPoly{}.degree() == -1);
  const ComplexPoly q = p * ComplexPoly{-1.0, 1.0};
  CHECK(q == ComplexPoly{-1.0, -1.0, 2.0});
  CHECK((q - q).is_zero());
  const auto div = q.divide_linear(1.0);
  CHECK(std::abs(div.remainder) < 1e-15);
  CHECK(div.quotient == p);
  const ComplexPoly sh = ComplexPoly{0.0, 0.0, 1.0}.shifted(1.0);  // (w+1)^2
  CHECK(sh == ComplexPoly{1.0, 2.0, 1.0});
}

TEST_CASE("poly_roots examples") {
  auto r = poly_roots(ComplexPoly{-1.0, 0.0, 1.0});
  std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(r[0] + 1.0) < 1e-14);
  CHECK(std::abs(r[1] - 1.0) < 1e-14);

  const auto c = find_roots(ComplexPoly{0.25, -1.0, 1.0});
  REQUIRE(c.size() == 1);
  CHECK(c[0].multiplicity == 2);
  CHECK(std::abs(c[0].value - 0.5) < 1e-12);

  auto q = poly_roots(ComplexPoly{1.0, -6.0, 1.0});
  std::sort(q.begin(), q.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(q[0] - (3.0 - 2.0 * kSqrt2)) < 1e-14);
  CHECK(std::abs(q[1] - (3.0 + 2.0 * kSqrt2)) < 1e-13);

  CHECK_THROWS_AS(poly_roots(ComplexPoly{2.0}), DomainError);
}

TEST_CASE("poly_roots property: multiplicities and residuals") {
  Gen g(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Complex> roots;
    const int distinct = g.integer(1, 6);
    for (int k = 0; k < distinct; ++k) {
      const Complex w = g.complex(2.0);
      const int m = g.integer(1, 3);
      for (int j = 0; j < m; ++j) roots.push_back(w);
    }
    const ComplexPoly p = ComplexPoly::from_roots(roots, g.complex(3.0) + 0.5);
    const auto clusters = find_roots(p);
    int total = 0;
    for (const auto& c : clusters) {
      total += c.multiplicity;
      CHECK(std::abs(p(c.value)) <= 1e-8 * residual_scale(p, c.value));
    }
    CHECK(total == p.degree());
    CHECK(clusters.size() <= static_cast<std::size_t>(distinct));
  }
}

TEST_CASE("fejer_riesz examples") {
  const std::vector<Complex> one{1.0};
  const ComplexPoly s1 = fejer_riesz(one);
  CHECK(s1.degree() == 0);
  CHECK(std::abs(s1(0.3) - 1.0) < 1e-15);

  // 2 - 2cos: boundary double root at 1 is split in half.
  const std::vector<Complex> c2{-1.0, 2.0, -1.0};
  const ComplexPoly s2 = fejer_riesz(c2);
  REQUIRE(s2.degree() == 1);
  CHECK(std::abs(s2.coeff(0) / s2.coeff(1) + 1.0) < 1e-12);
  CHECK(std::abs(std::abs(s2.coeff(1)) - 1.0) < 1e-12);
  CHECK(grid_rel_error(s2, c2) < 1e-8);

  // (3 - cos)/2: exterior root 3 + 2 sqrt 2; |gamma|^2 (2 + 2 sqrt 2)^2 = R(0) = 1.
  const std::vector<Complex> c3{-0.25, 1.5, -0.25};
  const ComplexPoly s3 = fejer_riesz(c3);
  REQUIRE(s3.degree() == 1);
  CHECK(std::abs(-s3.coeff(0) / s3.coeff(1) - (3.0 + 2.0 * kSqrt2)) < 1e-12);
  CHECK(std::abs(std::abs(s3.coeff(1)) - 1.0 / (2.0 * (1.0 + kSqrt2))) < 1e-12);
  CHECK(grid_rel_error(s3, c3) < 1e-8);

  const std::vector<Complex> negative{-1.0, 1.0, -1.0};  // 1 - 2cos
  CHECK_THROWS_AS(fejer_riesz(negative), DomainError);
  const std::vector<Complex> skew{0.5, 2.0, -0.5};
  CHECK_THROWS_AS(fejer_riesz(skew), DomainError);
  const std::vector<Complex> even{1.0, 2.0};
  CHECK_THROWS_AS(fejer_riesz(even), DomainError);
}

TEST_CASE("fejer_riesz property: outer factor of |u|^2") {
  Gen g(22);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Complex> roots;
    const int deg = g.integer(1, 6);
    for (int k = 0; k < deg; ++k) {
      Complex w = g.complex(2.0);
      if (g.integer(0, 3) == 0) w = g.circle();
      roots.push_back(w);
    }
    const ComplexPoly u = ComplexPoly::from_roots(roots, g.complex(1.0) + 1.0);
    std::vector<Complex> c(2 * deg + 1);
    for (int k = -deg; k <= deg; ++k) {
      Complex acc = 0.0;
      for (int j = 0; j <= deg; ++j)
        if (j + k >= 0) acc += u.coeff(j + k) * std::conj(u.coeff(j));
      c[k + deg] = acc;
    }
    const ComplexPoly s = fejer_riesz(c);
    CHECK(s.degree() == deg);
    for (Complex w : poly_roots(s)) CHECK(std::abs(w) >= 1.0 - 1e-8);
    CHECK(grid_rel_error(s, c) < 1e-8);
  }
}

TEST_CASE("RationalFn validation and arithmetic") {
  CHECK_THROWS_AS(RationalFn(ComplexPoly{1.0}, ComplexPoly{}), DomainError);
  CHECK_THROWS_AS(RationalFn(ComplexPoly{1.0}, ComplexPoly{1.0, -1.0}), DomainError);
  CHECK_THROWS_AS(RationalFn(ComplexPoly{1.0}, ComplexPoly{1.0, -2.0}), DomainError);
  const RationalFn f(ComplexPoly{1.0}, ComplexPoly{2.0, -1.0});
  CHECK(f.pole_radius() == doctest::Approx(2.0));
  CHECK(std::abs(f(1.0) - 1.0) < 1e-15);
  // Common factors cancel, so a removable singularity inside the disk is allowed.
  const RationalFn g(ComplexPoly{-0.5, 1.0}, ComplexPoly{-0.5, 1.0});
  CHECK(g.den().degree() == 0);
  const RationalFn h = f * RationalFn::polynomial(ComplexPoly{2.0, -1.0});
  CHECK(h.den().degree() == 0);
  CHECK(std::abs((f + f)(0.5) - 2.0 * f(0.5)) < 1e-15);
  CHECK(std::abs((f - f)(0.5)) < 1e-15);
}

TEST_CASE("Blaschke products as rational functions") {
  const BlaschkeProduct b{DiskSequence::from_complex(std::vector<Complex>{0.0, Complex(0.3, 0.5), -0.7})};
  const RationalFn r = blaschke_to_rational(b);
  Gen g(23);
  for (int i = 0; i < 20; ++i) {
    const Complex z = g.disk(1.0);
    CHECK(std::abs(r(z) - blaschke_eval(b, z)) < 1e-14);
  }
}

TEST_CASE("pythagorean mate of the worked example") {
  const RationalPair pair = worked_pair();
  const double c = -1.0 / (4.0 + 4.0 * kSqrt2);
  const ComplexPoly expect = ComplexPoly{1.0, 1.0} * ComplexPoly{-(3.0 + 2.0 * kSqrt2), 1.0} * Complex(c);
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(pair.a.num().coeff(k) - expect.coeff(k)) < 1e-12);
  REQUIRE(pair.zeros.size() == 1);
  CHECK(std::abs(pair.zeros[0].zeta.value() + 1.0) < 1e-12);
  CHECK(pair.zeros[0].multiplicity == 1);
  CHECK(pair.N == 1);
  CHECK(pair.M == 1);
  CHECK(pair.a(0.0).real() > 0.0);

  const PairReport rep = verify_pair(pair, 4096, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-10);

  // Deterministic: a second run gives identical coefficients.
  const RationalPair again = worked_pair();
  CHECK(again.a.num() == pair.a.num());
}

TEST_CASE("pythagorean mate of (1+z)/2") {
  const RationalPair pair = pythagorean_mate(RationalFn::polynomial(ComplexPoly{0.5, 0.5}));
  CHECK(std::abs(pair.a.num().coeff(0) / pair.a.den().coeff(0) - 0.5) < 1e-12);
  CHECK(std::abs(pair.a.num().coeff(1) / pair.a.den().coeff(0) + 0.5) < 1e-12);
  REQUIRE(pair.zeros.size() == 1);
  CHECK(std::abs(pair.zeros[0].zeta.value() - 1.0) < 1e-12);
  CHECK(verify_pair(pair).max_residual < 1e-14);
}

TEST_CASE("pythagorean mate rejects b off the unit sphere of H-infinity") {
  CHECK_THROWS_AS(pythagorean_mate(RationalFn::constant(0.0)), DomainError);
  CHECK_THROWS_AS(pythagorean_mate(RationalFn::polynomial(ComplexPoly{0.5, 0.6})), DomainError);
}

TEST_CASE("pythagorean mate of a rational b with a pole") {
  // b = kappa (1 - z)^2 / (2 - z), scaled so that sup|b| = 1 (attained at -1).
  const ComplexPoly num{1.0, -2.0, 1.0}, den{2.0, -1.0};
  const double kappa = 3.0 / 4.0;
  const RationalFn b(num * Complex(kappa), den);
  const RationalPair pair = pythagorean_mate(b);
  const PairReport rep = verify_pair(pair, 4096, 1e-9);
  CHECK(rep.pass);
  REQUIRE(pair.zeros.size() >= 1);
  bool at_minus_one = false;
  for (const auto& z : pair.zeros.zeros()) at_minus_one |= std::abs(z.zeta.value() + 1.0) < 1e-6;
  CHECK(at_minus_one);
}

TEST_CASE("verify_pair flags a perturbed mate") {
  RationalPair pair = worked_pair();
  pair.a = pair.a + RationalFn::constant(1e-3);
  const PairReport rep = verify_pair(pair, 4096, 1e-9);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_residual > 1e-4);
  CHECK(rep.max_residual < 4e-3);

  RationalPair exact{RationalFn::polynomial(ComplexPoly{0.5, 0.5}), RationalFn::polynomial(ComplexPoly{0.5, -0.5}),
                     BoundaryZeroSet({{UnitCirclePoint(1.0), 1}}), 1, 1};
  CHECK(verify_pair(exact).max_residual < 1e-15);
}

TEST_CASE("corona lower bound") {
  const RationalPair exact{RationalFn::polynomial(ComplexPoly{0.5, 0.5}), RationalFn::polynomial(ComplexPoly{0.5, -0.5}),
                           BoundaryZeroSet({{UnitCirclePoint(1.0), 1}}), 1, 1};
  CHECK(corona_lower_bound(exact) == doctest::Approx(0.5).epsilon(1e-12));

  const RationalPair pair = worked_pair();
  const double coarse = corona_lower_bound(pair, {64, 64, 1.0 - 1e-4});
  const double fine = corona_lower_bound(pair, {128, 128, 1.0 - 1e-4});
  CHECK(coarse > 0.0);
  CHECK(std::abs(coarse - fine) < 0.05 * fine);
}

TEST_CASE("pairs built from a prescribed boundary zero set") {
  const BoundaryZeroSet zs({{UnitCirclePoint(1.0), 2}, {UnitCirclePoint::from_angle(2.0), 1}});
  const RationalPair pair = pair_from_boundary_zeros(zs);
  CHECK(pair.N == 3);
  CHECK(pair.M == 2);
  CHECK(verify_pair(pair).pass);
  CHECK(std::abs(pair.a(1.0)) < 1e-14);

  CHECK_THROWS_AS(BoundaryZeroSet({{UnitCirclePoint(1.0), 1}, {UnitCirclePoint(1.0), 1}}), DomainError);
  CHECK_THROWS_AS(BoundaryZeroSet({{UnitCirclePoint(1.0), 0}}), DomainError);
}
