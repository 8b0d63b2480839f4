#include "hbinterp/random_seq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hbinterp/core.hpp"

namespace hbinterp {

namespace {

constexpr unsigned kQuadratureDepth = 20;  // at most 2^20 panels
constexpr double kQuadratureTolerance = 1e-10;
constexpr double kQuadratureAccept = 1e-8;

void check_m(int m) {
  if (m < 1) throw DomainError("M must be a positive integer");
}

double delta_of(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0, 1)");
  return 1.0 - r;
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("1 - r must lie in (0, 1]");
}

// Half-width of the exceedance arc {X > 1}, in [0, pi]. Uses
// 1 - u = (s - delta^2) / (2 r), s = (delta (2 - delta))^(1/M), and
// arccos(u) = 2 asin(sqrt((1 - u)/2)) to keep precision as r -> 1.
double exceedance_half_width(double delta, int m) {
  if (delta == 1.0) return 0.0;  // r = 0: X == 1 everywhere
  const double s = std::pow(delta * (2.0 - delta), 1.0 / m);
  const double one_minus_u = (s - delta * delta) / (2.0 * (1.0 - delta));
  if (one_minus_u <= 0.0) return 0.0;
  if (one_minus_u >= 2.0) return kPi;
  return 2.0 * std::asin(std::sqrt(one_minus_u / 2.0));
}

double neumaier_add(double& sum, double& comp, double term) {
  const double t = sum + term;
  if (std::abs(sum) >= std::abs(term)) {
    comp += (sum - t) + term;
  } else {
    comp += (term - t) + sum;
  }
  sum = t;
  return sum + comp;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<double> deltas(const RadiiFamily& family) {
  std::vector<double> d(family.count());
  for (std::size_t n = 1; n <= d.size(); ++n) {
    d[n - 1] = family.one_minus_radius(n);
    if (!(d[n - 1] > 0.0)) throw DomainError("radius " + std::to_string(n) + " is not below 1");
  }
  return d;
}

}  // namespace

SteinhausSample sample_steinhaus(const RadiiFamily& family, std::uint64_t seed) {
  FamilyDescriptor desc{family, SteinhausAngles{seed}};
  return {family, seed, DiskSequence::from_family(desc)};
}

double x_value(double delta, double theta, int m) {
  const double s = std::sin(0.5 * theta);
  const double d2 = delta * delta + 4.0 * (1.0 - delta) * s * s;
  return delta * (2.0 - delta) / std::pow(d2, m);
}

double exceedance_prob(double r, int m) {
  check_m(m);
  return exceedance_prob_delta(delta_of(r), m);
}

double exceedance_prob_delta(double delta, int m) {
  check_m(m);
  check_delta(delta);
  return exceedance_half_width(delta, m) / kPi;
}

TruncatedMoments truncated_moments(double r, int m) {
  check_m(m);
  return truncated_moments_delta(delta_of(r), m);
}

TruncatedMoments truncated_moments_delta(double delta, int m) {
  check_m(m);
  check_delta(delta);
  const double theta0 = exceedance_half_width(delta, m);
  if (theta0 >= kPi) return {0.0, 0.0};

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  // Y is even in theta, so E[Y^k] = (1/pi) int_{theta0}^{pi} X^k dtheta.
  auto integrate = [&](int power) {
    double err = 0.0, l1 = 0.0, val = 0.0;
    if (theta0 == 0.0) {
      auto f = [&](double t) { return std::pow(x_value(delta, t, m), power); };
      val = GK::integrate(f, 0.0, kPi, kQuadratureDepth, kQuadratureTolerance, &err, &l1);
    } else {
      // theta = theta0 e^s resolves the scale theta0 of the arc edge.
      auto f = [&](double s) {
        const double t = theta0 * std::exp(s);
        return std::pow(x_value(delta, t, m), power) * t;
      };
      val = GK::integrate(f, 0.0, std::log(kPi / theta0), kQuadratureDepth, kQuadratureTolerance, &err, &l1);
    }
    if (!(err <= kQuadratureAccept * std::max(l1, 1e-300))) {
      throw NonConvergenceError("truncated moment quadrature did not converge within 2^20 panels");
    }
    return val / kPi;
  };
  const double mean = integrate(1);
  const double second = integrate(2);
  return {mean, std::max(0.0, second - mean * mean)};
}

ThreeSeriesReport three_series(const RadiiFamily& family, int m) {
  check_m(m);
  ThreeSeriesReport rep;
  rep.m = m;
  const auto d = deltas(family);
  const std::size_t n = d.size();
  rep.prob_exceed.resize(n);
  rep.mean_truncated.resize(n);
  rep.var_truncated.resize(n);
  for (std::size_t k = 1; k <= n; k *= 2) rep.truncations.push_back(k);
  if (n > 0 && rep.truncations.back() != n) rep.truncations.push_back(n);

  double sp = 0, cp = 0, sm = 0, cm = 0, sv = 0, cv = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.prob_exceed[i] = exceedance_prob_delta(d[i], m);
    const auto mom = truncated_moments_delta(d[i], m);
    rep.mean_truncated[i] = mom.mean;
    rep.var_truncated[i] = mom.var;
    const double tp = neumaier_add(sp, cp, rep.prob_exceed[i]);
    const double tm = neumaier_add(sm, cm, mom.mean);
    const double tv = neumaier_add(sv, cv, mom.var);
    if (next < rep.truncations.size() && rep.truncations[next] == i + 1) {
      rep.sum_prob.push_back(tp);
      rep.sum_mean.push_back(tm);
      rep.sum_var.push_back(tv);
      ++next;
    }
  }
  if (std::holds_alternative<ExplicitRadii>(family.kind())) {
    rep.classification = SeriesClass::convergent;
  } else {
    rep.classification = classify_radii_series(family, 1.0 / (2.0 * m));
  }
  return rep;
}

DyadicReport dyadic_counts(const RadiiFamily& family, int m) {
  check_m(m);
  DyadicReport rep;
  rep.m = m;
  std::map<int, std::size_t> counts;
  for (double delta : deltas(family)) {
    // 2^-(k+1) < delta <= 2^-k. frexp gives delta = f 2^e with f in [0.5, 1).
    int e = 0;
    const double f = std::frexp(delta, &e);
    const int k = (f == 0.5) ? 1 - e : -e;
    ++counts[k];
  }
  for (const auto& [k, nk] : counts) {
    rep.counts.emplace_back(k, nk);
    const double c = static_cast<double>(nk);
    rep.carleson_sum += c * c * std::ldexp(1.0, -k);
    rep.random_sum += c * std::exp2(-k / (2.0 * m));
  }
  return rep;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("HB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ZeroOneReport zero_one_experiment(const RadiiFamily& family, int m, std::size_t trials, std::size_t truncation,
                                  double threshold, std::uint64_t master_seed, const ZeroOneOptions& opts) {
  check_m(m);
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (truncation < 1 || truncation > family.count()) {
    throw DomainError("truncation must lie in [1, family count]");
  }
  ZeroOneReport rep;
  rep.m = m;
  rep.trials = trials;
  rep.threshold = threshold;
  rep.truncations = {std::max<std::size_t>(1, truncation / 4), std::max<std::size_t>(1, truncation / 2), truncation};
  rep.trial_sums.assign(3, std::vector<double>(trials, 0.0));

  std::vector<double> d(truncation);
  for (std::size_t n = 1; n <= truncation; ++n) {
    d[n - 1] = family.one_minus_radius(n);
    if (!(d[n - 1] > 0.0)) throw DomainError("radius " + std::to_string(n) + " is not below 1");
  }

  auto run_trial = [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(master_seed, t);
    double sum = 0.0, comp = 0.0;
    std::size_t next = 0;
    for (std::size_t n = 1; n <= truncation; ++n) {
      const double theta = 2.0 * kPi * counter_uniform(seed, n) + opts.angle_shift - opts.zeta_angle;
      const double total = neumaier_add(sum, comp, x_value(d[n - 1], theta, m));
      while (next < 3 && rep.truncations[next] == n) rep.trial_sums[next++][t] = total;
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(opts.threads ? opts.threads : default_thread_count(), trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += workers) run_trial(t);
      });
    }
  }

  for (const auto& sums : rep.trial_sums) {
    const auto above = std::count_if(sums.begin(), sums.end(), [&](double s) { return s > threshold; });
    rep.exceedance_fraction.push_back(static_cast<double>(above) / static_cast<double>(trials));
    rep.median_sum.push_back(median(sums));
  }
  rep.median_change = rep.median_sum[2] > 0.0 ? std::abs(rep.median_sum[2] - rep.median_sum[1]) / rep.median_sum[2] : 0.0;
  rep.classification = std::holds_alternative<ExplicitRadii>(family.kind())
                           ? SeriesClass::unknown
                           : classify_radii_series(family, 1.0 / (2.0 * m));
  return rep;
}

}  // namespace hbinterp
