#include "softedge/ssm.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "softedge/error.hpp"
#include "softedge/kernels.hpp"
#include "softedge/metrics.hpp"
#include "softedge/synth.hpp"

namespace softedge {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidParams, "invalid SSM params: " + what);
}

bool all_finite(const std::vector<double>& v) { return first_non_finite(v) == v.size(); }

SsmPathStats path_stats(const FloatTensor& x, const FloatTensor& xq, const FloatTensor& y,
                        const FloatTensor& yq) {
  const QuantizerStats in = quantizer_stats(x, xq);
  const QuantizerStats out = quantizer_stats(y, yq);
  return {in.mse, in.max_abs_err, out.mse, out.sqnr_db, out.max_abs_err};
}

nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::ordered_json path_json(const SsmPathStats& s) {
  nlohmann::ordered_json o;
  o["input_mse"] = json_number(s.input_mse);
  o["input_max_abs_err"] = json_number(s.input_max_abs_err);
  o["output_mse"] = json_number(s.output_mse);
  o["output_sqnr_db"] = json_number(s.output_sqnr_db);
  o["output_max_abs_err"] = json_number(s.output_max_abs_err);
  return o;
}

}  // namespace

void SsmParams::validate() const {
  require(!a.empty(), "state dimension must be >= 1");
  require(b.size() == a.size() && c.size() == a.size(), "a, b, c must have equal length");
  require(h0.empty() || h0.size() == a.size(), "h0 must be empty or match the state dimension");
  require(all_finite(a) && all_finite(b) && all_finite(c) && all_finite(h0), "non-finite coefficient");
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(std::fabs(a[i]) < 1.0, "unstable decay |a[" + std::to_string(i) + "]| >= 1");
  }
}

SsmParams generate_ssm_params(std::size_t state_dim, std::uint64_t seed, double a_low, double a_high) {
  if (state_dim == 0) throw Error(ErrorKind::InvalidParams, "state dimension must be >= 1");
  if (!(a_low >= -1.0 && a_low <= a_high && a_high < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "decay range must lie inside (-1, 1)");
  }
  Xoshiro256 rng(seed);
  NormalSource normal(rng);
  SsmParams p;
  p.a.resize(state_dim);
  p.b.resize(state_dim);
  p.c.resize(state_dim);
  for (auto& v : p.a) v = a_low + (a_high - a_low) * rng.uniform();
  for (auto& v : p.b) v = normal.next();
  for (auto& v : p.c) v = normal.next();
  return p;
}

FloatTensor ssm_forward(const SsmParams& params, const FloatTensor& x) {
  params.validate();
  if (auto bad = first_non_finite(x.view()); bad != x.size()) {
    throw Error(ErrorKind::NonFiniteInput, "non-finite SSM input", bad);
  }
  std::vector<double> h = params.h0.empty() ? std::vector<double>(params.state_dim(), 0.0) : params.h0;
  FloatTensor y(x.size());
  kernels::active().ssm_scan(params.a, params.b, params.c, h, x.view(), y.view());
  return y;
}

FloatTensor ssm_forward_quantized(const SsmParams& params, const FloatTensor& x,
                                  const QuantConfig& cfg, Quantizer which) {
  return ssm_forward(params, fake_quant(x, cfg, which));
}

SsmRunReport run_report(const SsmParams& params, const FloatTensor& x, const QuantConfig& cfg) {
  if (x.empty()) throw Error(ErrorKind::EmptyTensor, "SSM input sequence is empty");
  const FloatTensor y = ssm_forward(params, x);
  const FloatTensor x_se = fake_quant(x, cfg, Quantizer::SoftEdge);
  const FloatTensor x_i8 = fake_quant(x, cfg, Quantizer::Int8);

  SsmRunReport r;
  r.seq_len = x.size();
  r.state_dim = params.state_dim();
  r.config = cfg;
  r.soft_edge = path_stats(x, x_se, y, ssm_forward(params, x_se));
  r.int8 = path_stats(x, x_i8, y, ssm_forward(params, x_i8));
  return r;
}

std::string ssm_report_to_json(const SsmRunReport& r) {
  nlohmann::ordered_json doc;
  doc["seq_len"] = r.seq_len;
  doc["state_dim"] = r.state_dim;
  doc["config"] = nlohmann::ordered_json::parse(config_to_json(r.config));
  doc["soft_edge"] = path_json(r.soft_edge);
  doc["int8"] = path_json(r.int8);
  doc["delta_output_mse"] = r.soft_edge.output_mse - r.int8.output_mse;
  return doc.dump(2) + "\n";
}

}  // namespace softedge
