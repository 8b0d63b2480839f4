#pragma once

// Parametric descriptions of disk sequences: radii laws and angle laws.
// A FamilyDescriptor reproduces its points deterministically.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace hbinterp {

/// r_n = 1 - c n^(-beta), clamped at 0.
struct PowerRadii {
  double c = 1.0;
  double beta = 1.0;
};

/// r_n = 1 - c q^n, clamped at 0.
struct GeometricRadii {
  double c = 1.0;
  double q = 0.5;
};

struct ExplicitRadii {
  std::vector<double> radii;
};

class RadiiFamily {
 public:
  using Kind = std::variant<PowerRadii, GeometricRadii, ExplicitRadii>;

  RadiiFamily(Kind kind, std::size_t count);
  static RadiiFamily power(double c, double beta, std::size_t count) { return {PowerRadii{c, beta}, count}; }
  static RadiiFamily geometric(double c, double q, std::size_t count) { return {GeometricRadii{c, q}, count}; }
  static RadiiFamily explicit_radii(std::vector<double> radii);

  const Kind& kind() const { return kind_; }
  std::size_t count() const { return count_; }
  RadiiFamily truncated(std::size_t n) const;

  /// 1 - r_n for the 1-based index n, exact for power/geometric laws.
  double one_minus_radius(std::size_t n) const;
  double radius(std::size_t n) const { return 1.0 - one_minus_radius(n); }

  std::string describe() const;

 private:
  Kind kind_;
  std::size_t count_;
};

/// Closed-form behavior of an infinite series determined by a family's law.
enum class SeriesClass { convergent, divergent, divergent_boundary, unknown };

const char* to_string(SeriesClass c);

/// Classifies sum_n (1 - r_n)^exponent for the infinite extension of the
/// family. Power laws diverge at beta * exponent = 1 (divergent_boundary);
/// explicit radii have no limit law and give unknown.
SeriesClass classify_radii_series(const RadiiFamily& family, double exponent);

/// Independent uniform angles generated from (seed, index).
struct SteinhausAngles {
  std::uint64_t seed = 0;
};

/// Deterministic angles, repeated cyclically when shorter than the family.
struct FixedAngles {
  std::vector<double> values;
};

using AngleLaw = std::variant<SteinhausAngles, FixedAngles>;

struct FamilyDescriptor {
  RadiiFamily radii;
  AngleLaw angles;

  double angle(std::size_t n) const;  // 1-based
};

/// Counter-based uniform draw in [0, 1): a pure function of (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

/// Derives an independent stream seed from a master seed and a stream index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace hbinterp
