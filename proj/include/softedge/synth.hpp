#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "softedge/tensor.hpp"

namespace softedge {

/// SplitMix64 (Steele, Lea, Flood). Used to seed Xoshiro256 and nothing else.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna), state filled by four SplitMix64 draws.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) noexcept;
  std::uint64_t next() noexcept;
  /// (next() >> 11) * 2^-53, in [0, 1).
  double uniform() noexcept;

 private:
  std::uint64_t s_[4];
};

/// Box-Muller over a Xoshiro256 stream. Each transform consumes
/// u1 = 1 - uniform(), u2 = uniform() and yields r cos(2 pi u2) then
/// r sin(2 pi u2), r = sqrt(-2 ln u1).
class NormalSource {
 public:
  explicit NormalSource(Xoshiro256& rng) noexcept : rng_(rng) {}
  double next();

 private:
  Xoshiro256& rng_;
  std::optional<double> cached_;
};

enum class DistKind { Gaussian, OutlierMixture, StudentT, LogNormal };

std::string_view to_string(DistKind k) noexcept;
DistKind parse_dist_kind(std::string_view name);

struct DistSpec {
  DistKind kind = DistKind::Gaussian;
  double mean = 0.0;
  double std = 1.0;
  double outlier_fraction = 0.001;
  double outlier_low = 10.0;
  double outlier_high = 30.0;
  double degrees_of_freedom = 5.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Deterministic for a fixed spec. Per element:
///  gaussian:        mean + std z
///  outlier_mixture: u = uniform(); if u < f, magnitude low + (high-low) uniform()
///                   with sign from the top bit of next(); else mean + std z
///  student_t:       mean + std z / sqrt(chi2 / dof), chi2 = 2 Gamma(dof/2)
///  lognormal:       exp(mean + std z)
FloatTensor generate(const DistSpec& spec);

}  // namespace softedge
