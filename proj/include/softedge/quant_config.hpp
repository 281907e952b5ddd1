#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace softedge {

/// Offline calibration artifact for the soft-edge quantizer.
///
/// Values with |x| < low_threshold use the fine step scale/fine_divisor,
/// values in [low_threshold, high_threshold] use the standard INT8 step
/// `scale`, and values above high_threshold use the coarse step
/// scale*coarse_multiplier offset from high_threshold.
struct QuantConfig {
  double scale = 1.0;
  double low_threshold = 16.0;
  double high_threshold = 127.0;
  double fine_divisor = 4.0;
  double coarse_multiplier = 4.0;
  // Provenance only; not part of the quantizer's behavior.
  std::optional<double> percentile;
  std::optional<std::uint64_t> calib_count;

  double fine_step() const noexcept { return scale / fine_divisor; }
  double coarse_step() const noexcept { return scale * coarse_multiplier; }

  /// Throws Error{InvalidConfig} unless scale > 0, 0 < L < H, divisor and
  /// multiplier >= 1, everything finite.
  void validate() const;

  /// Multiplies scale, L and H by c. Divisor and multiplier are unchanged.
  QuantConfig scaled(double c) const;

  /// Bitwise equality of the five behavioral fields.
  bool same_quantizer(const QuantConfig& other) const noexcept;
};

/// JSON document with keys scale, low_threshold, high_threshold,
/// fine_divisor, coarse_multiplier, percentile, calib_count. Numbers use the
/// shortest decimal form that round-trips through binary64; absent metadata
/// is written as null.
std::string config_to_json(const QuantConfig& cfg);
QuantConfig config_from_json(std::string_view text);

QuantConfig load_config(const std::string& path);
void save_config(const std::string& path, const QuantConfig& cfg);

/// Shortest round-trip decimal for a double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

}  // namespace softedge
