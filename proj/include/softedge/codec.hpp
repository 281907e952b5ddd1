#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "softedge/quant_config.hpp"
#include "softedge/tensor.hpp"

namespace softedge {

enum class RegionClass : std::uint8_t { Small = 0, Medium = 1, Large = 2 };

std::string_view to_string(RegionClass r) noexcept;

enum class Quantizer { SoftEdge, Int8 };

std::string_view to_string(Quantizer q) noexcept;

inline constexpr int kMaxStandardCode = 127;
inline constexpr int kMaxSpecialMagnitude = 63;

/// One encoded element. With se_flag clear the byte is a two's-complement
/// INT8 code; with se_flag set it is [sign:1][large:1][magnitude:6].
struct SoftEdgeCode {
  bool se_flag = false;
  std::uint8_t byte = 0;

  static constexpr std::uint8_t kSignBit = 0x80;
  static constexpr std::uint8_t kRegionBit = 0x40;
  static constexpr std::uint8_t kMagnitudeMask = 0x3F;

  bool sign() const noexcept { return (byte & kSignBit) != 0; }
  bool large() const noexcept { return (byte & kRegionBit) != 0; }
  int magnitude() const noexcept { return byte & kMagnitudeMask; }
  int standard_code() const noexcept { return static_cast<std::int8_t>(byte); }

  /// True for every pattern the encoder can emit.
  bool canonical() const noexcept;

  friend bool operator==(const SoftEdgeCode&, const SoftEdgeCode&) = default;
};

/// Half-away-from-zero rounding (std::round semantics).
double round_half_away(double v) noexcept;

/// |x| < L -> Small, L <= |x| <= H -> Medium, |x| > H -> Large.
RegionClass classify(double x, const QuantConfig& cfg);

SoftEdgeCode se_encode(double x, const QuantConfig& cfg);

enum class DecodeMode { Strict, Lenient };

/// Strict mode rejects the non-canonical negative zero (flag 1, sign 1,
/// small, m = 0). Lenient mode decodes it as +0. INT8 code -128 is accepted
/// in both modes.
double se_decode(SoftEdgeCode c, const QuantConfig& cfg,
                 DecodeMode mode = DecodeMode::Strict);

std::int8_t int8_encode(double x, const QuantConfig& cfg);
double int8_decode(std::int8_t b, const QuantConfig& cfg) noexcept;

/// Element-wise decode(encode(x)), rounded through binary32. Throws
/// NonFiniteInput with the offending index.
FloatTensor fake_quant(const FloatTensor& t, const QuantConfig& cfg, Quantizer which);

/// Packed soft-edge codes. `flags` is a bitmap, element i at byte i/8,
/// bit i%8 (LSB first), pad bits zero.
class QuantizedTensor {
 public:
  QuantizedTensor() = default;
  QuantizedTensor(QuantConfig config, std::vector<std::uint8_t> flags,
                  std::vector<std::uint8_t> codes);

  const QuantConfig& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return codes_.size(); }
  const std::vector<std::uint8_t>& flag_bytes() const noexcept { return flags_; }
  const std::vector<std::uint8_t>& code_bytes() const noexcept { return codes_; }

  bool flag(std::size_t i) const noexcept { return (flags_[i / 8] >> (i % 8)) & 1U; }
  SoftEdgeCode code(std::size_t i) const noexcept { return {flag(i), codes_[i]}; }

  /// Bitwise comparison of config fields, flags and codes.
  friend bool operator==(const QuantizedTensor& a, const QuantizedTensor& b) noexcept;

 private:
  QuantConfig config_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint8_t> codes_;
};

inline std::size_t bitmap_bytes(std::size_t n) noexcept { return (n + 7) / 8; }

QuantizedTensor encode_tensor(const FloatTensor& t, const QuantConfig& cfg);

/// Decodes and rounds through binary32, so
/// decode_tensor(encode_tensor(t, cfg)) == fake_quant(t, cfg, SoftEdge).
FloatTensor decode_tensor(const QuantizedTensor& q);

/// Behavioral signal dump of the quantizer datapath for one value.
struct TraceRecord {
  double input = 0.0;
  RegionClass region = RegionClass::Small;
  double selected_step = 0.0;
  bool se_flag = false;
  bool sign_bit = false;
  bool region_bit = false;
  int magnitude = 0;  // 6-bit m when se_flag, else the signed INT8 code
  std::uint8_t byte = 0;
  double reconstructed = 0.0;
  double abs_error = 0.0;
};

TraceRecord hardware_trace(double x, const QuantConfig& cfg);

/// "region=Large step=4 flag=1 byte=0x52 recon=199 err=1"
std::string format_trace(const TraceRecord& r);

}  // namespace softedge
