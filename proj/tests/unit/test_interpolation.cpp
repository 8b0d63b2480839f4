#include "doctest.h"

#include <cmath>
#include <vector>

#include "hbinterp/interpolation.hpp"
#include "support.hpp"

using namespace hbinterp;
using hbtest::Gen;

namespace {

DiskSequence seq_of(std::vector<Complex> zs) { return DiskSequence::from_complex(zs); }

RationalPair pair_half_plus() { return pythagorean_mate(RationalFn::polynomial(ComplexPoly{0.5, 0.5})); }

// Random well-separated nodes in |z| <= rmax.
std::vector<Complex> random_nodes(Gen& gen, int n, double rmax, double min_rho) {
  std::vector<Complex> zs;
  while (static_cast<int>(zs.size()) < n) {
    const Complex z = gen.disk(rmax);
    bool ok = true;
    for (Complex w : zs) ok = ok && std::abs(z - w) / std::abs(1.0 - std::conj(w) * z) > min_rho;
    if (ok) zs.push_back(z);
  }
  return zs;
}

}  // namespace

TEST_CASE("carleson examples") {
  const auto r1 = carleson_delta(seq_of({0.0}));
  CHECK(r1.delta == 1.0);
  CHECK(r1.separation == 1.0);

  CHECK(carleson_delta(seq_of({0.0, 0.5})).delta == doctest::Approx(0.5).epsilon(1e-15));

  const auto r3 = carleson_delta(seq_of({0.0, 0.5, -0.5}));
  // The origin sees both others at distance 1/2; each of +-1/2 gets 0.5 * 0.8.
  CHECK(r3.delta == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r3.argmin_index == 0);
  CHECK(r3.separation == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(carleson_delta(seq_of({0.3, 0.3})), DomainError);
  CHECK_THROWS_AS(carleson_delta(DiskSequence{}), DomainError);
}

TEST_CASE("carleson delta is monotone and below separation (property)") {
  Gen gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto zs = random_nodes(gen, gen.integer(2, 15), 0.97, 1e-3);
    const auto before = carleson_delta(seq_of(zs));
    CHECK(before.delta <= before.separation * (1.0 + 1e-14));
    CHECK(before.separation <= 1.0);
    zs.push_back(random_nodes(gen, 1, 0.97, 0.0)[0]);
    const auto after = carleson_delta(seq_of(zs));
    CHECK(after.delta <= before.delta * (1.0 + 1e-14));

    const std::vector<std::size_t> ts{1, zs.size() - 1, zs.size()};
    const auto curve = carleson_delta_curve(seq_of(zs), ts);
    CHECK(curve[0] == 1.0);
    CHECK(curve[1] == doctest::Approx(before.delta).epsilon(1e-12));
    CHECK(curve[2] == doctest::Approx(after.delta).epsilon(1e-12));
  }
}

TEST_CASE("sum condition examples") {
  const auto radial = DiskSequence::from_family({RadiiFamily::geometric(1.0, 0.5, 32), FixedAngles{{0.0}}});
  const auto at_one = sum_condition(radial, BoundaryZeroSet({{UnitCirclePoint(1.0), 1}}));
  REQUIRE(at_one.per_zero.size() == 1);
  const auto& s1 = at_one.per_zero[0];
  CHECK(s1.classification == SeriesClass::divergent);
  CHECK(s1.truncations.back() == 32);
  for (std::size_t i = 1; i < s1.partial_sums.size(); ++i) CHECK(s1.partial_sums[i] > 1.9 * s1.partial_sums[i - 1]);

  const auto at_minus = sum_condition(radial, BoundaryZeroSet({{UnitCirclePoint(-1.0), 1}}));
  CHECK(at_minus.per_zero[0].classification == SeriesClass::convergent);
  const auto& ps = at_minus.per_zero[0].partial_sums;
  CHECK(ps.back() - ps[ps.size() - 2] < 1e-4);

  const auto origin = sum_condition(seq_of({0.0}), BoundaryZeroSet({{UnitCirclePoint::from_angle(1.0), 3}}));
  CHECK(origin.per_zero[0].partial_sums.back() == doctest::Approx(1.0));
  CHECK(origin.per_zero[0].classification == SeriesClass::unknown);

  Gen gen(32);
  const auto rnd = seq_of(random_nodes(gen, 100, 0.99, 0.0));
  for (const auto& z : sum_condition(rnd, BoundaryZeroSet({{UnitCirclePoint(1.0), 2}})).per_zero)
    for (std::size_t i = 1; i < z.partial_sums.size(); ++i) CHECK(z.partial_sums[i] >= z.partial_sums[i - 1]);
}

TEST_CASE("decision examples") {
  const auto pair = pair_half_plus();  // mate (1 - z)/2 vanishes at 1

  const auto random = DiskSequence::from_family({RadiiFamily::geometric(1.0, 0.5, 40), SteinhausAngles{7}});
  const auto d1 = decide(pair, random);
  CHECK(d1.verdict == Verdict::interpolating);
  CHECK(d1.almost_sure);
  for (double d : d1.delta_curve) CHECK(d > 0.05);

  const auto radial = DiskSequence::from_family({RadiiFamily::geometric(1.0, 0.5, 40), FixedAngles{{0.0}}});
  const auto d2 = decide(pair, radial);
  CHECK(d2.verdict == Verdict::not_interpolating);
  CHECK_FALSE(d2.almost_sure);

  const auto d3 = decide(pair, seq_of({0.3}));
  CHECK(d3.verdict == Verdict::interpolating_finite);
  CHECK(std::string(to_string(d3.verdict)) == "interpolating (finite)");

  const auto away = DiskSequence::from_family({RadiiFamily::geometric(1.0, 0.5, 40), FixedAngles{{kPi}}});
  CHECK(decide(pair, away).verdict == Verdict::interpolating);

  const auto crowded = DiskSequence::from_family({RadiiFamily::power(1.0, 1.0, 40), FixedAngles{{kPi}}});
  CHECK(decide(pair, crowded).verdict == Verdict::not_interpolating);

  const auto expl = DiskSequence::from_family({RadiiFamily::explicit_radii({0.1, 0.5}), FixedAngles{{kPi}}});
  CHECK(decide(pair, expl).verdict == Verdict::indeterminate);

  // Random angles: power radii interpolate a.s. exactly when beta > 2M.
  const auto mult2 = pair_from_boundary_zeros(BoundaryZeroSet({{UnitCirclePoint(1.0), 2}}));
  for (auto [beta, want] : {std::pair{5.0, Verdict::interpolating}, std::pair{4.0, Verdict::not_interpolating},
                            std::pair{3.0, Verdict::not_interpolating}}) {
    const auto fam = DiskSequence::from_family({RadiiFamily::power(0.5, beta, 30), SteinhausAngles{3}});
    CHECK(decide(mult2, fam).verdict == want);
  }
}

TEST_CASE("pick feasibility examples") {
  CHECK(pick_feasible({seq_of({0.4}), {0.3}, 0.5}));
  CHECK(pick_feasible({seq_of({0.4}), {0.5}, 0.5}));
  CHECK_FALSE(pick_feasible({seq_of({0.4}), {0.6}, 0.5}));

  CHECK(pick_feasible({seq_of({0.0, 0.5}), {0.0, 0.5}, 1.0}));
  CHECK_FALSE(pick_feasible({seq_of({0.0, 0.5}), {0.0, 0.5}, 0.999}));

  CHECK(pick_feasible({seq_of({0.0, 0.5, Complex(0.0, 0.9)}), {0.0, 0.0, 0.0}, 1e-9}));
  CHECK_THROWS_AS(pick_feasible({seq_of({0.0}), {}, 1.0}), DomainError);
}

TEST_CASE("Nevanlinna-Pick examples") {
  const auto one = np_solve(seq_of({0.0}), std::vector<Complex>{0.5});
  CHECK(one.t_star == doctest::Approx(0.5).epsilon(1e-12));
  for (Complex z : {Complex(0.0), Complex(0.5, 0.5), Complex(-0.9)}) CHECK(std::abs(one.f(z) - 0.5) < 1e-9);

  const auto two = np_solve(seq_of({0.0, 0.5}), std::vector<Complex>{0.0, 0.5});
  CHECK(std::abs(two.t_star - 1.0) < 1e-9);
  CHECK(std::abs(two.f(0.0)) < 1e-9);
  CHECK(std::abs(two.f(0.5) - 0.5) < 1e-9);
  CHECK(std::abs(two.f(Complex(0.2, -0.3)) - Complex(0.2, -0.3)) < 1e-5);
  CHECK(two.boundary_sup <= 1.0 + 1e-5);

  const auto zero = np_solve(seq_of({0.1, 0.2}), std::vector<Complex>{0.0, 0.0});
  CHECK(zero.t_star == 0.0);
  CHECK(zero.f.is_zero());
}

TEST_CASE("Nevanlinna-Pick certificates and sharpness (property)") {
  Gen gen(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 8);
    const auto nodes = seq_of(random_nodes(gen, n, 0.9, 0.05));
    std::vector<Complex> w(n);
    for (auto& x : w) x = gen.complex();
    const auto sol = np_solve(nodes, w);
    for (int i = 0; i < n; ++i) CHECK(std::abs(sol.f(nodes[i].value()) - w[i]) <= 1e-9 * std::max(1.0, sol.t_star));
    CHECK(sol.boundary_sup <= sol.t_star * (1.0 + 1e-5));
    CHECK_FALSE(pick_feasible({nodes, w, sol.t_star * (1.0 - 1e-6)}));
    CHECK(pick_feasible({nodes, w, sol.t_star * (1.0 + 1e-6)}));
  }
}

TEST_CASE("add point examples") {
  const auto pair = pair_half_plus();
  const BlaschkeProduct bz{seq_of({0.0})};
  const auto f = add_point(RationalFn::constant(0.0), pair, bz, UnitDiskPoint(0.5), 1.0);
  CHECK(std::abs(f(0.5) - 1.0) < 1e-12);
  CHECK(std::abs(f(0.0)) == 0.0);

  const RationalFn F(ComplexPoly{0.3, Complex(0.0, 0.2)}, ComplexPoly{1.0, -0.25});
  const auto same = add_point(F, pair, bz, UnitDiskPoint(0.5), F(0.5));
  CHECK(same.num() == F.num());

  CHECK_THROWS_AS(add_point(F, pair, bz, UnitDiskPoint(0.0), 1.0), DomainError);
}

TEST_CASE("add point keeps old values (property)") {
  Gen gen(34);
  const auto pair = pair_from_boundary_zeros(BoundaryZeroSet({{UnitCirclePoint(1.0), 1}, {UnitCirclePoint(-1.0), 1}}));
  for (int trial = 0; trial < 30; ++trial) {
    const auto zs = random_nodes(gen, gen.integer(2, 6), 0.9, 0.05);
    const std::vector<Complex> old(zs.begin(), zs.end() - 1);
    const RationalFn F(ComplexPoly{gen.complex(), gen.complex()}, ComplexPoly{1.0, gen.disk(0.5)});
    const Complex v0 = gen.complex();
    const auto f = add_point(F, pair, BlaschkeProduct{seq_of(old)}, UnitDiskPoint(zs.back()), v0);
    CHECK(std::abs(f(zs.back()) - v0) < 1e-10);
    for (Complex z : old) CHECK(std::abs(f(z) - F(z)) < 1e-12);
  }
}

TEST_CASE("multiplier construction examples") {
  const auto pair1 = pair_from_boundary_zeros(BoundaryZeroSet({{UnitCirclePoint(1.0), 1}}));
  const auto c1 = construct_multiplier(pair1, seq_of({0.0}), std::vector<Complex>{Complex(0.7, -0.2)});
  CHECK(c1.value_residuals[0] < 1e-9);
  CHECK(std::isfinite(c1.boundary_sup));

  const auto c0 = construct_multiplier(pair1, seq_of({0.2, -0.4}), std::vector<Complex>{0.0, 0.0});
  CHECK(c0.F.is_zero());

  const auto pair = pair_half_plus();
  const auto c2 = construct_multiplier(pair, seq_of({0.0, 0.5}), std::vector<Complex>{1.0, 0.0});
  CHECK(std::abs(c2.F(0.0) - 1.0) < 1e-8);
  CHECK(std::abs(c2.F(0.5)) < 1e-8);
  // F lies in a H^2: its P_{N-1} part is the jet at 1, which vanishes.
  CHECK(std::abs(c2.decomposition.p.coeff(0)) < 1e-8);
  CHECK(std::abs(c2.F(1.0 - 1e-9)) < 1e-6);
}

TEST_CASE("multiplier certificates (property)") {
  Gen gen(35);
  const std::vector<RationalPair> pairs{
      pair_half_plus(),
      pair_from_boundary_zeros(BoundaryZeroSet({{UnitCirclePoint(1.0), 2}})),
      pair_from_boundary_zeros(BoundaryZeroSet({{UnitCirclePoint(1.0), 1}, {UnitCirclePoint::from_angle(2.5), 1}})),
  };
  for (int trial = 0; trial < 12; ++trial) {
    const auto& pair = pairs[trial % pairs.size()];
    const auto nodes = seq_of(random_nodes(gen, gen.integer(1, 10), 0.9, 0.3));
    if (carleson_delta(nodes).delta < 0.1) continue;
    std::vector<Complex> v(nodes.size());
    for (auto& x : v) x = gen.complex();
    const auto cert = construct_multiplier(pair, nodes, v);
    for (double r : cert.value_residuals) CHECK(r <= 1e-8);
    CHECK(std::isfinite(cert.boundary_sup));
    CHECK(std::isfinite(hb_norm(cert.decomposition).value));
    // The interpolant vanishes to the mate's order at every boundary zero.
    for (const auto& z : pair.zeros.zeros()) {
      const auto jet = AnalyticSeries::from_rational(cert.F).jet(z.zeta.value(), z.multiplicity);
      for (Complex c : jet) CHECK(std::abs(c) < 1e-6 * std::max(1.0, cert.boundary_sup));
    }
  }
}

TEST_CASE("Pick bounds grow along a divergent family") {
  const auto pair = pair_half_plus();
  const auto fam = DiskSequence::from_family({RadiiFamily::geometric(1.0, 0.5, 32), FixedAngles{{0.0}}});
  REQUIRE(decide(pair, fam).verdict == Verdict::not_interpolating);
  double prev_t = 0.0, prev_eig = 2.0;
  for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
    const auto sub = fam.truncated(n);
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i % 2 ? -1.0 : 1.0;
    const auto bound = np_bound(sub, v);
    CHECK(bound.t_star > prev_t);
    CHECK(bound.boundary_sup >= bound.t_star * (1.0 - 1e-9));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(bound.chain(sub[i].value()) - v[i]) < 1e-6 * bound.t_star);
    prev_t = bound.t_star;
    const double eig = gram(pair, sub).min_eig;
    CHECK(eig < prev_eig);
    prev_eig = eig;
  }
}
