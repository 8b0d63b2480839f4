#pragma once

// Steinhaus random sequences: sampling, the exact exceedance probability and
// truncated moments of X_n = (1 - |lambda_n|^2)/|1 - lambda_n|^(2M), the
// three-series diagnostics, dyadic counts and the zero-one experiment.
//
// Everything is keyed on delta = 1 - r so that radii closer to the circle
// than double precision can resolve stay exact.

#include <cstdint>
#include <utility>
#include <vector>

#include "hbinterp/disk.hpp"
#include "hbinterp/family.hpp"

namespace hbinterp {

struct SteinhausSample {
  RadiiFamily family;
  std::uint64_t seed = 0;
  DiskSequence points;
};

/// lambda_n = r_n e^(i theta_n) with theta_n = 2 pi counter_uniform(seed, n).
SteinhausSample sample_steinhaus(const RadiiFamily& family, std::uint64_t seed);

/// X for a point at radius 1 - delta and angle theta relative to the
/// boundary point: delta (2 - delta) / (delta^2 + 4 (1 - delta) sin^2(theta/2))^M.
double x_value(double delta, double theta, int m);

/// P(X > 1) = arccos(u)/pi over a uniform angle, u = (1 + r^2 - (1 - r^2)^(1/M))/(2r).
double exceedance_prob(double r, int m);
double exceedance_prob_delta(double delta, int m);

struct TruncatedMoments {
  double mean = 0.0;
  double var = 0.0;
};

/// E[Y] and Var[Y] for Y = X 1{X <= 1} by adaptive Gauss-Kronrod quadrature in
/// a logarithmic angle variable. Throws NonConvergenceError if the error
/// estimate stays above 1e-10 relative.
TruncatedMoments truncated_moments(double r, int m);
TruncatedMoments truncated_moments_delta(double delta, int m);

struct ThreeSeriesReport {
  int m = 1;
  std::vector<double> prob_exceed, mean_truncated, var_truncated;  // per n
  std::vector<std::size_t> truncations;                            // 1, 2, 4, ... and the full length
  std::vector<double> sum_prob, sum_mean, sum_var;                 // partial sums at the truncations
  /// All three series behave like sum (1 - r_n^2)^(1/(2M)). A finite explicit
  /// list is classified convergent.
  SeriesClass classification = SeriesClass::unknown;
};

ThreeSeriesReport three_series(const RadiiFamily& family, int m);

struct DyadicReport {
  int m = 1;
  /// (k, N_k) for every nonempty annulus 1 - 2^-k <= r < 1 - 2^-(k+1).
  std::vector<std::pair<int, std::size_t>> counts;
  double carleson_sum = 0.0;  // sum N_k^2 2^-k
  double random_sum = 0.0;    // sum N_k 2^(-k/(2M))
};

DyadicReport dyadic_counts(const RadiiFamily& family, int m);

struct ZeroOneOptions {
  /// Argument of the boundary point zeta.
  double zeta_angle = 0.0;
  /// Deterministic rotation added to every sampled angle.
  double angle_shift = 0.0;
  /// Worker threads; 0 reads HB_THREADS, then the hardware concurrency.
  unsigned threads = 0;
};

struct ZeroOneReport {
  int m = 1;
  std::size_t trials = 0;
  double threshold = 0.0;
  std::vector<std::size_t> truncations;        // T/4, T/2, T
  std::vector<double> exceedance_fraction;     // fraction of trial sums above threshold
  std::vector<double> median_sum;
  double median_change = 0.0;                  // |med(T) - med(T/2)| / med(T)
  std::vector<std::vector<double>> trial_sums; // [truncation][trial]
  SeriesClass classification = SeriesClass::unknown;  // of sum (1 - r_n^2)^(1/(2M))
};

/// For each trial t (seed derive_seed(master_seed, t)), the sums of X_n at
/// the boundary point up to T/4, T/2 and T. Bit-identical for any thread count.
ZeroOneReport zero_one_experiment(const RadiiFamily& family, int m, std::size_t trials, std::size_t truncation,
                                  double threshold, std::uint64_t master_seed, const ZeroOneOptions& opts = {});

/// Worker count: HB_THREADS if set and positive, else the hardware concurrency.
unsigned default_thread_count();

}  // namespace hbinterp
