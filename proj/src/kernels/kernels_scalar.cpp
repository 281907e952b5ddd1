#include <algorithm>

#include "kernels/scalar_codec.hpp"
#include "softedge/kernels.hpp"

namespace softedge::kernels {

namespace {

using detail::through_binary32;

void fake_quant_soft_edge(std::span<const double> in, std::span<double> out,
                          const CodecParams& p) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = through_binary32(detail::decode_value(detail::encode_value(in[i], p), p));
  }
}

void fake_quant_int8(std::span<const double> in, std::span<double> out, const CodecParams& p) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = through_binary32(static_cast<double>(detail::int8_encode_value(in[i], p)) * p.scale);
  }
}

void encode_soft_edge(std::span<const double> in, std::span<std::uint8_t> codes,
                      std::span<std::uint8_t> flags, const CodecParams& p) {
  std::fill(flags.begin(), flags.end(), std::uint8_t{0});
  for (std::size_t i = 0; i < in.size(); ++i) {
    const SoftEdgeCode c = detail::encode_value(in[i], p);
    codes[i] = c.byte;
    if (c.se_flag) flags[i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
  }
}

void decode_soft_edge(std::span<const std::uint8_t> codes, std::span<const std::uint8_t> flags,
                      std::span<double> out, const CodecParams& p) {
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const bool flag = (flags[i / 8] >> (i % 8)) & 1U;
    out[i] = through_binary32(detail::decode_value({flag, codes[i]}, p));
  }
}

double leaf_sum_squares(std::span<const double> v) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) lane[i % 4] += v[i] * v[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double leaf_sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    lane[i % 4] += d * d;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void ssm_scan(std::span<const double> a, std::span<const double> b, std::span<const double> c,
              std::span<double> h, std::span<const double> x, std::span<double> y) {
  const std::size_t n = h.size();
  for (std::size_t t = 0; t < x.size(); ++t) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = a[i] * h[i] + b[i] * x[t];
      lane[i % 4] += c[i] * h[i];
    }
    y[t] = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  }
}

constexpr KernelTable kScalar{
    Isa::Scalar,      fake_quant_soft_edge,  fake_quant_int8, encode_soft_edge,
    decode_soft_edge, leaf_sum_squares,      leaf_sum_squared_diff, ssm_scan,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace softedge::kernels
