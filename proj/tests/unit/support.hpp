#pragma once

// Shared generators for property tests.

#include <cmath>
#include <complex>
#include <random>

#include "hbinterp/core.hpp"

namespace hbtest {

using hbinterp::Complex;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Point of the disk with |z| <= rmax, uniform in angle.
  Complex disk(double rmax = 0.95) {
    return std::polar(rmax * std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 2.0 * hbinterp::kPi));
  }
  Complex circle() { return std::polar(1.0, uniform(0.0, 2.0 * hbinterp::kPi)); }
  Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace hbtest
