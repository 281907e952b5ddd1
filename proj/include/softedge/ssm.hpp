#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "softedge/codec.hpp"
#include "softedge/quant_config.hpp"
#include "softedge/tensor.hpp"

namespace softedge {

/// Diagonal time-invariant linear recurrence
///   h_t[i] = a[i] h_{t-1}[i] + b[i] x_t,   y_t = sum_i c[i] h_t[i].
struct SsmParams {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> h0;  // empty means all zero

  std::size_t state_dim() const noexcept { return a.size(); }

  /// Throws InvalidParams on size mismatch, non-finite values, |a_i| >= 1.
  void validate() const;
};

/// a_i ~ U[a_low, a_high], then b_i ~ N(0,1), then c_i ~ N(0,1), drawn in
/// that order from one Xoshiro256 stream.
SsmParams generate_ssm_params(std::size_t state_dim, std::uint64_t seed,
                              double a_low = 0.5, double a_high = 0.99);

FloatTensor ssm_forward(const SsmParams& params, const FloatTensor& x);

/// ssm_forward applied to fake_quant(x, cfg, which).
FloatTensor ssm_forward_quantized(const SsmParams& params, const FloatTensor& x,
                                  const QuantConfig& cfg, Quantizer which);

struct SsmPathStats {
  double input_mse = 0.0;
  double input_max_abs_err = 0.0;
  double output_mse = 0.0;
  double output_sqnr_db = 0.0;
  double output_max_abs_err = 0.0;
};

struct SsmRunReport {
  std::size_t seq_len = 0;
  std::size_t state_dim = 0;
  QuantConfig config;
  SsmPathStats soft_edge;
  SsmPathStats int8;
};

SsmRunReport run_report(const SsmParams& params, const FloatTensor& x,
                        const QuantConfig& cfg);

std::string ssm_report_to_json(const SsmRunReport& r);

}  // namespace softedge
