#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and an
// optional AVX2 variant; the variant is chosen once at runtime and must be
// bitwise identical to the reference for every finite input.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace softedge::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Precomputed codec constants shared by all kernels.
struct CodecParams {
  double scale;
  double low;
  double high;
  double fine_step;
  double coarse_step;
};

struct KernelTable {
  Isa isa;
  // out[i] = binary32(decode(encode(in[i]))) on the soft-edge path.
  void (*fake_quant_soft_edge)(std::span<const double> in, std::span<double> out,
                               const CodecParams& p);
  // out[i] = binary32(clamp(round(in[i]/s), -127, 127) * s).
  void (*fake_quant_int8)(std::span<const double> in, std::span<double> out,
                          const CodecParams& p);
  // codes.size() == in.size(); flags.size() == ceil(n/8), fully overwritten.
  void (*encode_soft_edge)(std::span<const double> in, std::span<std::uint8_t> codes,
                           std::span<std::uint8_t> flags, const CodecParams& p);
  // Canonical codes only (caller validates). out[i] rounded through binary32.
  void (*decode_soft_edge)(std::span<const std::uint8_t> codes,
                           std::span<const std::uint8_t> flags, std::span<double> out,
                           const CodecParams& p);
  // Leaf sums of the fixed reduction tree: four lanes, element i -> lane i%4,
  // result (l0 + l1) + (l2 + l3).
  double (*leaf_sum_squares)(std::span<const double> v);
  double (*leaf_sum_squared_diff)(std::span<const double> a, std::span<const double> b);
  // Runs the diagonal recurrence over x, updating h in place. The output sum
  // over state uses the same four-lane scheme.
  void (*ssm_scan)(std::span<const double> a, std::span<const double> b,
                   std::span<const double> c, std::span<double> h,
                   std::span<const double> x, std::span<double> y);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Best table for this CPU unless overridden with force_isa.
const KernelTable& active() noexcept;

/// Returns false (and changes nothing) if the ISA is unavailable.
bool force_isa(Isa isa) noexcept;
void reset_isa() noexcept;

}  // namespace softedge::kernels
