#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "softedge/codec.hpp"
#include "softedge/quant_config.hpp"
#include "softedge/tensor.hpp"

namespace softedge {

// Sums use a fixed reduction tree: ranges longer than kSumLeaf are split in
// half recursively; each leaf accumulates into four interleaved lanes
// (element i -> lane i%4) that are combined as (l0 + l1) + (l2 + l3).
inline constexpr std::size_t kSumLeaf = 256;

double sum_squares(std::span<const double> v);
double sum_squared_diff(std::span<const double> a, std::span<const double> b);
double sum_abs(std::span<const double> v);

double mse(const FloatTensor& ref, const FloatTensor& approx);

/// 10 log10(sum ref^2 / sum (ref - approx)^2); +inf when the error is zero.
double sqnr_db(const FloatTensor& ref, const FloatTensor& approx);

struct RegionStats {
  RegionClass region = RegionClass::Small;
  std::size_t count = 0;
  double fraction = 0.0;
  double mse = 0.0;
  double max_abs_err = 0.0;
  double mean_abs_err = 0.0;
};

/// Soft-edge fake-quant error bucketed by region of the input value.
std::array<RegionStats, 3> region_breakdown(const FloatTensor& t, const QuantConfig& cfg);

struct QuantizerStats {
  double mse = 0.0;
  double sqnr_db = 0.0;
  double max_abs_err = 0.0;
};

struct ComparisonReport {
  QuantConfig config;
  std::size_t n = 0;
  QuantizerStats soft_edge;
  QuantizerStats int8;
  std::array<RegionStats, 3> regions{};
  // soft_edge minus int8. delta.sqnr_db is 0 when both are +inf.
  QuantizerStats delta;
};

QuantizerStats quantizer_stats(const FloatTensor& ref, const FloatTensor& approx);
QuantizerStats stats_delta(const QuantizerStats& a, const QuantizerStats& b) noexcept;

ComparisonReport compare_quantizers(const FloatTensor& t, const QuantConfig& cfg);

std::string report_to_json(const ComparisonReport& r);

/// Columns: kind,name,count,fraction,mse,sqnr_db,max_abs_err,mean_abs_err.
/// Rows: quantizer soft_edge, quantizer int8, quantizer delta, then one
/// region row per region of the soft-edge path. Inapplicable cells are empty.
std::string report_to_csv(const ComparisonReport& r);

}  // namespace softedge
