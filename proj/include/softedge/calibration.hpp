#pragma once

#include <cstdint>
#include <optional>

#include "softedge/quant_config.hpp"
#include "softedge/tensor.hpp"

namespace softedge {

inline constexpr double kDefaultFineDivisor = 4.0;
inline constexpr double kDefaultCoarseMultiplier = 4.0;

/// p-th percentile of |t| with linear interpolation between closest ranks:
/// r = (p/100)(n-1), result = w[floor r] + frac(r)(w[floor r + 1] - w[floor r]).
double percentile_abs(const FloatTensor& t, double p);

/// percentile_abs(t, p) / 127, rounded to the nearest binary32 value.
/// Throws DegenerateRange when the clip point is zero or the scale is not
/// representable as a normal binary32.
double calibrate_scale(const FloatTensor& t, double p);

/// L = 64 * (scale / fine_divisor), H = 127 * scale.
QuantConfig derive_config(double scale,
                          double fine_divisor = kDefaultFineDivisor,
                          double coarse_multiplier = kDefaultCoarseMultiplier,
                          std::optional<double> percentile = std::nullopt,
                          std::optional<std::uint64_t> calib_count = std::nullopt);

/// calibrate_scale followed by derive_config, recording p and n.
QuantConfig calibrate(const FloatTensor& t, double p,
                      double fine_divisor = kDefaultFineDivisor,
                      double coarse_multiplier = kDefaultCoarseMultiplier);

}  // namespace softedge
