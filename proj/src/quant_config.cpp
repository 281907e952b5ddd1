#include "softedge/quant_config.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "softedge/error.hpp"

namespace softedge {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, std::string("invalid config: ") + what);
}

bool same_bits(double a, double b) noexcept {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

double number_field(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) {
    throw Error(ErrorKind::InvalidConfig, std::string("config JSON: missing numeric key '") + key + "'");
  }
  return it->get<double>();
}

}  // namespace

void QuantConfig::validate() const {
  require(std::isfinite(scale) && scale > 0.0, "scale must be finite and > 0");
  require(std::isfinite(low_threshold) && low_threshold > 0.0, "low_threshold must be finite and > 0");
  require(std::isfinite(high_threshold), "high_threshold must be finite");
  require(low_threshold < high_threshold, "low_threshold must be < high_threshold");
  require(std::isfinite(fine_divisor) && fine_divisor >= 1.0, "fine_divisor must be >= 1");
  require(std::isfinite(coarse_multiplier) && coarse_multiplier >= 1.0, "coarse_multiplier must be >= 1");
  require(std::isfinite(fine_step()) && fine_step() > 0.0, "fine step underflows");
  require(std::isfinite(coarse_step()), "coarse step overflows");
  if (percentile) require(*percentile > 0.0 && *percentile <= 100.0, "percentile must be in (0, 100]");
}

QuantConfig QuantConfig::scaled(double c) const {
  QuantConfig out = *this;
  out.scale *= c;
  out.low_threshold *= c;
  out.high_threshold *= c;
  return out;
}

bool QuantConfig::same_quantizer(const QuantConfig& o) const noexcept {
  return same_bits(scale, o.scale) && same_bits(low_threshold, o.low_threshold) &&
         same_bits(high_threshold, o.high_threshold) && same_bits(fine_divisor, o.fine_divisor) &&
         same_bits(coarse_multiplier, o.coarse_multiplier);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string config_to_json(const QuantConfig& cfg) {
  std::ostringstream os;
  os << "{\n"
     << "  \"scale\": " << format_double(cfg.scale) << ",\n"
     << "  \"low_threshold\": " << format_double(cfg.low_threshold) << ",\n"
     << "  \"high_threshold\": " << format_double(cfg.high_threshold) << ",\n"
     << "  \"fine_divisor\": " << format_double(cfg.fine_divisor) << ",\n"
     << "  \"coarse_multiplier\": " << format_double(cfg.coarse_multiplier) << ",\n"
     << "  \"percentile\": " << (cfg.percentile ? format_double(*cfg.percentile) : "null") << ",\n"
     << "  \"calib_count\": " << (cfg.calib_count ? std::to_string(*cfg.calib_count) : "null") << "\n"
     << "}\n";
  return os.str();
}

QuantConfig config_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::InvalidConfig, "config JSON: expected an object");

  QuantConfig cfg;
  cfg.scale = number_field(doc, "scale");
  cfg.low_threshold = number_field(doc, "low_threshold");
  cfg.high_threshold = number_field(doc, "high_threshold");
  cfg.fine_divisor = number_field(doc, "fine_divisor");
  cfg.coarse_multiplier = number_field(doc, "coarse_multiplier");
  if (auto it = doc.find("percentile"); it != doc.end() && !it->is_null()) {
    if (!it->is_number()) throw Error(ErrorKind::InvalidConfig, "config JSON: percentile must be a number");
    cfg.percentile = it->get<double>();
  }
  if (auto it = doc.find("calib_count"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) {
      throw Error(ErrorKind::InvalidConfig, "config JSON: calib_count must be a non-negative integer");
    }
    cfg.calib_count = it->get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

QuantConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const std::string& path, const QuantConfig& cfg) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out << config_to_json(cfg);
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for '" + path + "'");
}

}  // namespace softedge
