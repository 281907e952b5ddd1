#include "softedge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "kernels/scalar_codec.hpp"
#include "softedge/error.hpp"
#include "softedge/kernels.hpp"

namespace softedge {

namespace {

template <class Leaf>
double tree_sum(std::size_t begin, std::size_t end, const Leaf& leaf) {
  if (end - begin <= kSumLeaf) return leaf(begin, end);
  const std::size_t mid = begin + (end - begin) / 2;
  return tree_sum(begin, mid, leaf) + tree_sum(mid, end, leaf);
}

void require_comparable(const FloatTensor& ref, const FloatTensor& approx) {
  if (ref.size() != approx.size()) {
    throw Error(ErrorKind::LengthMismatch, "tensor lengths differ: " + std::to_string(ref.size()) +
                                               " vs " + std::to_string(approx.size()));
  }
  if (ref.empty()) throw Error(ErrorKind::EmptyTensor, "metrics need at least one element");
}

double sqnr_from_sums(double signal, double noise) {
  if (signal == 0.0) throw Error(ErrorKind::ZeroSignal, "reference signal power is zero");
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

nlohmann::json number_or_sentinel(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json stats_json(const QuantizerStats& s) {
  return {{"mse", number_or_sentinel(s.mse)},
          {"sqnr_db", number_or_sentinel(s.sqnr_db)},
          {"max_abs_err", number_or_sentinel(s.max_abs_err)}};
}

}  // namespace

double sum_squares(std::span<const double> v) {
  const auto& k = kernels::active();
  return tree_sum(0, v.size(), [&](std::size_t b, std::size_t e) {
    return k.leaf_sum_squares(v.subspan(b, e - b));
  });
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  const auto& k = kernels::active();
  return tree_sum(0, a.size(), [&](std::size_t lo, std::size_t hi) {
    return k.leaf_sum_squared_diff(a.subspan(lo, hi - lo), b.subspan(lo, hi - lo));
  });
}

double sum_abs(std::span<const double> v) {
  return tree_sum(0, v.size(), [&](std::size_t b, std::size_t e) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = b; i < e; ++i) lane[(i - b) % 4] += std::fabs(v[i]);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
  });
}

double mse(const FloatTensor& ref, const FloatTensor& approx) {
  require_comparable(ref, approx);
  return sum_squared_diff(ref.view(), approx.view()) / static_cast<double>(ref.size());
}

double sqnr_db(const FloatTensor& ref, const FloatTensor& approx) {
  require_comparable(ref, approx);
  return sqnr_from_sums(sum_squares(ref.view()), sum_squared_diff(ref.view(), approx.view()));
}

QuantizerStats quantizer_stats(const FloatTensor& ref, const FloatTensor& approx) {
  require_comparable(ref, approx);
  QuantizerStats s;
  const double noise = sum_squared_diff(ref.view(), approx.view());
  s.mse = noise / static_cast<double>(ref.size());
  s.sqnr_db = sqnr_from_sums(sum_squares(ref.view()), noise);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    s.max_abs_err = std::max(s.max_abs_err, std::fabs(ref[i] - approx[i]));
  }
  return s;
}

QuantizerStats stats_delta(const QuantizerStats& a, const QuantizerStats& b) noexcept {
  QuantizerStats d;
  d.mse = a.mse - b.mse;
  d.max_abs_err = a.max_abs_err - b.max_abs_err;
  d.sqnr_db = (std::isinf(a.sqnr_db) && std::isinf(b.sqnr_db)) ? 0.0 : a.sqnr_db - b.sqnr_db;
  return d;
}

std::array<RegionStats, 3> region_breakdown(const FloatTensor& t, const QuantConfig& cfg) {
  const FloatTensor fq = fake_quant(t, cfg, Quantizer::SoftEdge);
  const auto params = detail::codec_params(cfg);

  std::array<std::vector<double>, 3> errors;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = static_cast<std::size_t>(detail::classify_value(t[i], params));
    errors[r].push_back(t[i] - fq[i]);
  }

  std::array<RegionStats, 3> out{};
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& e = errors[r];
    RegionStats& s = out[r];
    s.region = static_cast<RegionClass>(r);
    s.count = e.size();
    if (e.empty()) continue;
    const double n = static_cast<double>(e.size());
    s.fraction = n / static_cast<double>(t.size());
    s.mse = sum_squares(e) / n;
    s.mean_abs_err = sum_abs(e) / n;
    for (double v : e) s.max_abs_err = std::max(s.max_abs_err, std::fabs(v));
  }
  return out;
}

ComparisonReport compare_quantizers(const FloatTensor& t, const QuantConfig& cfg) {
  if (t.empty()) throw Error(ErrorKind::EmptyTensor, "cannot compare quantizers on an empty tensor");
  ComparisonReport r;
  r.config = cfg;
  r.n = t.size();
  r.soft_edge = quantizer_stats(t, fake_quant(t, cfg, Quantizer::SoftEdge));
  r.int8 = quantizer_stats(t, fake_quant(t, cfg, Quantizer::Int8));
  r.regions = region_breakdown(t, cfg);
  r.delta = stats_delta(r.soft_edge, r.int8);
  return r;
}

std::string report_to_json(const ComparisonReport& r) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::parse(config_to_json(r.config));
  doc["n"] = r.n;
  doc["quantizers"] = {{"soft_edge", stats_json(r.soft_edge)}, {"int8", stats_json(r.int8)}};
  doc["delta"] = stats_json(r.delta);
  auto regions = nlohmann::ordered_json::array();
  for (const auto& s : r.regions) {
    nlohmann::ordered_json o;
    o["region"] = std::string(to_string(s.region));
    o["count"] = s.count;
    o["fraction"] = s.fraction;
    o["mse"] = s.mse;
    o["max_abs_err"] = s.max_abs_err;
    o["mean_abs_err"] = s.mean_abs_err;
    regions.push_back(std::move(o));
  }
  doc["regions"] = std::move(regions);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os << "kind,name,count,fraction,mse,sqnr_db,max_abs_err,mean_abs_err\n";
  auto quantizer_row = [&](const char* name, const QuantizerStats& s) {
    os << "quantizer," << name << ',' << r.n << ",," << format_double(s.mse) << ','
       << format_double(s.sqnr_db) << ',' << format_double(s.max_abs_err) << ",\n";
  };
  quantizer_row("soft_edge", r.soft_edge);
  quantizer_row("int8", r.int8);
  quantizer_row("delta", r.delta);
  for (const auto& s : r.regions) {
    os << "region," << to_string(s.region) << ',' << s.count << ',' << format_double(s.fraction)
       << ',' << format_double(s.mse) << ",," << format_double(s.max_abs_err) << ','
       << format_double(s.mean_abs_err) << '\n';
  }
  return os.str();
}

}  // namespace softedge
