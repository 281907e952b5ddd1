#include "softedge/codec.hpp"

#include <cmath>
#include <cstdio>

#include "softedge/error.hpp"
#include "softedge/kernels.hpp"
#include "kernels/scalar_codec.hpp"

namespace softedge {

namespace {

void require_finite(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteInput, "non-finite input value");
}

void require_finite(const FloatTensor& t) {
  if (auto bad = first_non_finite(t.view()); bad != t.size()) {
    throw Error(ErrorKind::NonFiniteInput,
                "non-finite input value at index " + std::to_string(bad), bad);
  }
}

}  // namespace

std::string_view to_string(RegionClass r) noexcept {
  switch (r) {
    case RegionClass::Small: return "Small";
    case RegionClass::Medium: return "Medium";
    case RegionClass::Large: return "Large";
  }
  return "?";
}

std::string_view to_string(Quantizer q) noexcept {
  return q == Quantizer::SoftEdge ? "soft_edge" : "int8";
}

bool SoftEdgeCode::canonical() const noexcept {
  if (!se_flag) return byte != 0x80;
  // Negative zero lives only in the small region; large m = 0 is +-H.
  return !(sign() && !large() && magnitude() == 0);
}

double round_half_away(double v) noexcept { return std::round(v); }

RegionClass classify(double x, const QuantConfig& cfg) {
  require_finite(x);
  return detail::classify_value(x, detail::codec_params(cfg));
}

SoftEdgeCode se_encode(double x, const QuantConfig& cfg) {
  require_finite(x);
  return detail::encode_value(x, detail::codec_params(cfg));
}

double se_decode(SoftEdgeCode c, const QuantConfig& cfg, DecodeMode mode) {
  if (c.se_flag && !c.canonical() && mode == DecodeMode::Strict) {
    throw Error(ErrorKind::NonCanonicalCode, "negative zero soft-edge code");
  }
  return detail::decode_value(c, detail::codec_params(cfg));
}

std::int8_t int8_encode(double x, const QuantConfig& cfg) {
  require_finite(x);
  return detail::int8_encode_value(x, detail::codec_params(cfg));
}

double int8_decode(std::int8_t b, const QuantConfig& cfg) noexcept {
  return static_cast<double>(b) * cfg.scale;
}

FloatTensor fake_quant(const FloatTensor& t, const QuantConfig& cfg, Quantizer which) {
  cfg.validate();
  require_finite(t);
  FloatTensor out(t.size());
  const auto params = detail::codec_params(cfg);
  const auto& k = kernels::active();
  if (which == Quantizer::SoftEdge) {
    k.fake_quant_soft_edge(t.view(), out.view(), params);
  } else {
    k.fake_quant_int8(t.view(), out.view(), params);
  }
  return out;
}

QuantizedTensor::QuantizedTensor(QuantConfig config, std::vector<std::uint8_t> flags,
                                 std::vector<std::uint8_t> codes)
    : config_(std::move(config)), flags_(std::move(flags)), codes_(std::move(codes)) {
  config_.validate();
  if (flags_.size() != bitmap_bytes(codes_.size())) {
    throw Error(ErrorKind::MalformedPayload, "flag bitmap length does not match code count");
  }
  if (const auto rem = codes_.size() % 8; rem != 0 && (flags_.back() >> rem) != 0) {
    throw Error(ErrorKind::MalformedPayload, "flag bitmap pad bits are not zero");
  }
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (code(i).se_flag && !code(i).canonical()) {
      throw Error(ErrorKind::NonCanonicalCode,
                  "non-canonical soft-edge code at index " + std::to_string(i), i);
    }
  }
}

bool operator==(const QuantizedTensor& a, const QuantizedTensor& b) noexcept {
  return a.config_.same_quantizer(b.config_) && a.flags_ == b.flags_ && a.codes_ == b.codes_;
}

QuantizedTensor encode_tensor(const FloatTensor& t, const QuantConfig& cfg) {
  cfg.validate();
  require_finite(t);
  std::vector<std::uint8_t> codes(t.size());
  std::vector<std::uint8_t> flags(bitmap_bytes(t.size()));
  kernels::active().encode_soft_edge(t.view(), codes, flags, detail::codec_params(cfg));
  return QuantizedTensor(cfg, std::move(flags), std::move(codes));
}

FloatTensor decode_tensor(const QuantizedTensor& q) {
  FloatTensor out(q.size());
  kernels::active().decode_soft_edge(q.code_bytes(), q.flag_bytes(), out.view(),
                                     detail::codec_params(q.config()));
  return out;
}

TraceRecord hardware_trace(double x, const QuantConfig& cfg) {
  cfg.validate();
  TraceRecord r;
  r.input = x;
  r.region = classify(x, cfg);
  switch (r.region) {
    case RegionClass::Small: r.selected_step = cfg.fine_step(); break;
    case RegionClass::Medium: r.selected_step = cfg.scale; break;
    case RegionClass::Large: r.selected_step = cfg.coarse_step(); break;
  }
  const SoftEdgeCode c = se_encode(x, cfg);
  r.se_flag = c.se_flag;
  r.byte = c.byte;
  if (c.se_flag) {
    r.sign_bit = c.sign();
    r.region_bit = c.large();
    r.magnitude = c.magnitude();
  } else {
    r.sign_bit = c.standard_code() < 0;
    r.magnitude = c.standard_code();
  }
  r.reconstructed = se_decode(c, cfg);
  r.abs_error = std::fabs(x - r.reconstructed);
  return r;
}

std::string format_trace(const TraceRecord& r) {
  char byte_hex[8];
  std::snprintf(byte_hex, sizeof(byte_hex), "0x%02X", static_cast<unsigned>(r.byte));
  std::string s;
  s += "region=";
  s += to_string(r.region);
  s += " step=" + format_double(r.selected_step);
  s += " flag=";
  s += r.se_flag ? '1' : '0';
  s += " byte=";
  s += byte_hex;
  s += " recon=" + format_double(r.reconstructed);
  s += " err=" + format_double(r.abs_error);
  return s;
}

}  // namespace softedge
