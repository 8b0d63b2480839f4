#include "hbinterp/family.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hbinterp/core.hpp"

namespace hbinterp {

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(mix64(master) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = mix64(derive_seed(seed, index));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

RadiiFamily::RadiiFamily(Kind kind, std::size_t count) : kind_(std::move(kind)), count_(count) {
  std::visit(Overloaded{
                 [](const PowerRadii& p) {
                   if (!(p.c > 0.0) || !(p.beta > 0.0) || !std::isfinite(p.c) || !std::isfinite(p.beta))
                     throw DomainError("power radii family needs c > 0 and beta > 0");
                 },
                 [](const GeometricRadii& g) {
                   if (!(g.c > 0.0) || !std::isfinite(g.c) || !(g.q > 0.0 && g.q < 1.0))
                     throw DomainError("geometric radii family needs c > 0 and 0 < q < 1");
                 },
                 [this](const ExplicitRadii& e) {
                   if (e.radii.size() < count_) throw DomainError("explicit radii list shorter than count");
                   for (double r : e.radii)
                     if (!(r >= 0.0 && r < 1.0)) throw DomainError("explicit radii must lie in [0, 1)");
                 },
             },
             kind_);
}

RadiiFamily RadiiFamily::explicit_radii(std::vector<double> radii) {
  const std::size_t n = radii.size();
  return {ExplicitRadii{std::move(radii)}, n};
}

RadiiFamily RadiiFamily::truncated(std::size_t n) const {
  RadiiFamily out = *this;
  out.count_ = std::min(n, count_);
  return out;
}

double RadiiFamily::one_minus_radius(std::size_t n) const {
  if (n == 0) throw DomainError("radii families are indexed from 1");
  const double nn = static_cast<double>(n);
  return std::visit(Overloaded{
                        [nn](const PowerRadii& p) { return std::min(1.0, p.c * std::pow(nn, -p.beta)); },
                        [nn](const GeometricRadii& g) { return std::min(1.0, g.c * std::pow(g.q, nn)); },
                        [n](const ExplicitRadii& e) { return 1.0 - e.radii.at(n - 1); },
                    },
                    kind_);
}

std::string RadiiFamily::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const PowerRadii& p) { os << "power(c=" << p.c << ",beta=" << p.beta << ")"; },
                 [&](const GeometricRadii& g) { os << "geometric(c=" << g.c << ",q=" << g.q << ")"; },
                 [&](const ExplicitRadii&) { os << "explicit"; },
             },
             kind_);
  os << "[" << count_ << "]";
  return os.str();
}

double FamilyDescriptor::angle(std::size_t n) const {
  return std::visit(Overloaded{
                        [n](const SteinhausAngles& s) { return 2.0 * kPi * counter_uniform(s.seed, n); },
                        [n](const FixedAngles& f) {
                          if (f.values.empty()) throw DomainError("fixed angle list is empty");
                          return f.values[(n - 1) % f.values.size()];
                        },
                    },
                    angles);
}

const char* to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::convergent: return "convergent";
    case SeriesClass::divergent: return "divergent";
    case SeriesClass::divergent_boundary: return "divergent (boundary)";
    case SeriesClass::unknown: return "unknown";
  }
  return "unknown";
}

SeriesClass classify_radii_series(const RadiiFamily& family, double exponent) {
  if (!(exponent > 0.0)) throw DomainError("classify_radii_series: exponent must be positive");
  return std::visit(Overloaded{
                        [exponent](const PowerRadii& p) {
                          const double s = p.beta * exponent;
                          if (std::abs(s - 1.0) <= 1e-12) return SeriesClass::divergent_boundary;
                          return s > 1.0 ? SeriesClass::convergent : SeriesClass::divergent;
                        },
                        [](const GeometricRadii&) { return SeriesClass::convergent; },
                        [](const ExplicitRadii&) { return SeriesClass::unknown; },
                    },
                    family.kind());
}

}  // namespace hbinterp
