#pragma once

// Per-value soft-edge math on precomputed constants. This is the definitional
// path: the public codec API and the scalar reference kernels both call it.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "softedge/codec.hpp"
#include "softedge/kernels.hpp"

namespace softedge::detail {

inline kernels::CodecParams codec_params(const QuantConfig& cfg) noexcept {
  return {cfg.scale, cfg.low_threshold, cfg.high_threshold, cfg.fine_step(), cfg.coarse_step()};
}

inline int clamped_round(double v, double lo, double hi) noexcept {
  return static_cast<int>(std::clamp(std::round(v), lo, hi));
}

inline RegionClass classify_value(double x, const kernels::CodecParams& p) noexcept {
  const double ax = std::fabs(x);
  if (ax < p.low) return RegionClass::Small;
  if (ax > p.high) return RegionClass::Large;
  return RegionClass::Medium;
}

inline SoftEdgeCode encode_value(double x, const kernels::CodecParams& p) noexcept {
  const double ax = std::fabs(x);
  switch (classify_value(x, p)) {
    case RegionClass::Small: {
      const int m = clamped_round(ax / p.fine_step, 0.0, kMaxSpecialMagnitude);
      const bool neg = std::signbit(x) && m != 0;
      return {true, static_cast<std::uint8_t>((neg ? SoftEdgeCode::kSignBit : 0) | m)};
    }
    case RegionClass::Medium: {
      const int q = clamped_round(x / p.scale, -kMaxStandardCode, kMaxStandardCode);
      return {false, static_cast<std::uint8_t>(static_cast<std::int8_t>(q))};
    }
    case RegionClass::Large:
      break;
  }
  const int m = clamped_round((ax - p.high) / p.coarse_step, 0.0, kMaxSpecialMagnitude);
  const std::uint8_t sign = std::signbit(x) ? SoftEdgeCode::kSignBit : 0;
  return {true, static_cast<std::uint8_t>(sign | SoftEdgeCode::kRegionBit | m)};
}

// Negative zero decodes as +0 here; strictness is the caller's business.
inline double decode_value(SoftEdgeCode c, const kernels::CodecParams& p) noexcept {
  if (!c.se_flag) return static_cast<double>(c.standard_code()) * p.scale;
  const double m = static_cast<double>(c.magnitude());
  if (!c.large()) {
    if (c.magnitude() == 0) return 0.0;
    const double v = m * p.fine_step;
    return c.sign() ? -v : v;
  }
  const double v = p.high + m * p.coarse_step;
  return c.sign() ? -v : v;
}

inline std::int8_t int8_encode_value(double x, const kernels::CodecParams& p) noexcept {
  return static_cast<std::int8_t>(clamped_round(x / p.scale, -kMaxStandardCode, kMaxStandardCode));
}

inline double through_binary32(double v) noexcept {
  return static_cast<double>(static_cast<float>(v));
}

}  // namespace softedge::detail
