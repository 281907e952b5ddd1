#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "softedge/calibration.hpp"
#include "softedge/codec.hpp"
#include "softedge/error.hpp"
#include "softedge/kernels.hpp"
#include "softedge/metrics.hpp"
#include "softedge/ssm.hpp"
#include "softedge/synth.hpp"
#include "softedge/tensor_io.hpp"

namespace softedge::cli {

namespace {

struct CalibrateOpts {
  std::string input, out;
  double percentile = 99.99;
  double fine_divisor = kDefaultFineDivisor;
  double coarse_multiplier = kDefaultCoarseMultiplier;
};

struct CodecOpts {
  std::string input, config, out;
};

struct EvalOpts {
  std::string input, config, format = "json", out;
};

struct SynthOpts {
  std::string dist = "gaussian", out;
  DistSpec spec;
};

struct SsmOpts {
  std::size_t seq_len = 4096;
  std::size_t state_dim = 16;
  std::uint64_t seed = 7;
  std::string input, config, report;
  double percentile = 99.99;
  double a_low = 0.5, a_high = 0.99;
  DistSpec input_spec{DistKind::OutlierMixture};
};

struct SweepOpts {
  std::string input, out;
  std::vector<double> percentiles{99.99, 99.999};
  std::vector<double> fine_divisors{kDefaultFineDivisor};
  std::vector<double> coarse_multipliers{kDefaultCoarseMultiplier};
};

struct TraceOpts {
  double value = 0.0;
  std::string config;
  double scale = 1.0;
};

void write_text(const std::string& path, const std::string& text) {
  io::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

int cmd_calibrate(const CalibrateOpts& o, std::ostream& out) {
  const FloatTensor t = io::read_tensor(o.input);
  const QuantConfig cfg = calibrate(t, o.percentile, o.fine_divisor, o.coarse_multiplier);
  save_config(o.out, cfg);
  out << "scale=" << format_double(cfg.scale) << " L=" << format_double(cfg.low_threshold)
      << " H=" << format_double(cfg.high_threshold) << '\n';
  return kOk;
}

int cmd_quantize(const CodecOpts& o, std::ostream& out) {
  const FloatTensor t = io::read_tensor(o.input);
  const QuantConfig cfg = load_config(o.config);
  const std::size_t bytes = io::write_packed(o.out, encode_tensor(t, cfg));
  out << "n=" << t.size() << " bytes=" << bytes << '\n';
  return kOk;
}

int cmd_dequantize(const CodecOpts& o, std::ostream& out) {
  const QuantizedTensor q = io::read_packed(o.input);
  if (!o.config.empty() && !load_config(o.config).same_quantizer(q.config())) {
    throw Error(ErrorKind::InvalidConfig, "--config does not match the config embedded in '" + o.input + "'");
  }
  const std::size_t bytes = io::write_tensor(o.out, decode_tensor(q));
  out << "n=" << q.size() << " bytes=" << bytes << '\n';
  return kOk;
}

int cmd_eval(const EvalOpts& o, std::ostream& out) {
  const FloatTensor t = io::read_tensor(o.input);
  const ComparisonReport r = compare_quantizers(t, load_config(o.config));
  emit(o.out, o.format == "csv" ? report_to_csv(r) : report_to_json(r), out);
  return kOk;
}

int cmd_synth(SynthOpts o, std::ostream& out) {
  o.spec.kind = parse_dist_kind(o.dist);
  const std::size_t bytes = io::write_tensor(o.out, generate(o.spec));
  out << "dist=" << o.dist << " n=" << o.spec.n << " seed=" << o.spec.seed << " bytes=" << bytes << '\n';
  return kOk;
}

int cmd_ssm(SsmOpts o, std::ostream& out) {
  FloatTensor x;
  if (!o.input.empty()) {
    x = io::read_tensor(o.input);
  } else {
    o.input_spec.n = o.seq_len;
    o.input_spec.seed = o.seed;
    x = generate(o.input_spec);
  }
  const SsmParams params = generate_ssm_params(o.state_dim, o.seed, o.a_low, o.a_high);
  const QuantConfig cfg = o.config.empty() ? calibrate(x, o.percentile) : load_config(o.config);
  const SsmRunReport r = run_report(params, x, cfg);
  write_text(o.report, ssm_report_to_json(r));
  out << "seq_len=" << r.seq_len << " state_dim=" << r.state_dim
      << " se_output_mse=" << format_double(r.soft_edge.output_mse)
      << " int8_output_mse=" << format_double(r.int8.output_mse) << '\n';
  return kOk;
}

int cmd_sweep(const SweepOpts& o, std::ostream& out) {
  const FloatTensor t = io::read_tensor(o.input);
  std::ostringstream csv;
  csv << "percentile,fine_divisor,coarse_multiplier,scale,L,H,se_mse,se_sqnr_db,int8_mse,"
         "int8_sqnr_db,delta_sqnr_db\n";
  std::size_t rows = 0;
  for (double p : o.percentiles) {
    const double scale = calibrate_scale(t, p);
    for (double d : o.fine_divisors) {
      for (double m : o.coarse_multipliers) {
        const QuantConfig cfg = derive_config(scale, d, m, p, t.size());
        const ComparisonReport r = compare_quantizers(t, cfg);
        csv << format_double(p) << ',' << format_double(d) << ',' << format_double(m) << ','
            << format_double(cfg.scale) << ',' << format_double(cfg.low_threshold) << ','
            << format_double(cfg.high_threshold) << ',' << format_double(r.soft_edge.mse) << ','
            << format_double(r.soft_edge.sqnr_db) << ',' << format_double(r.int8.mse) << ','
            << format_double(r.int8.sqnr_db) << ',' << format_double(r.delta.sqnr_db) << '\n';
        ++rows;
      }
    }
  }
  emit(o.out, csv.str(), out);
  if (!o.out.empty() && o.out != "-") out << "rows=" << rows << '\n';
  return kOk;
}

int cmd_trace(const TraceOpts& o, std::ostream& out) {
  const QuantConfig cfg = o.config.empty() ? derive_config(o.scale) : load_config(o.config);
  out << format_trace(hardware_trace(o.value, cfg)) << '\n';
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoFailure: return kIoError;
    case ErrorKind::Internal: return kInternalError;
    default: return kValidationError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soft-edge activation quantizer: calibration, codec, evaluation and simulation", "softedge"};
  app.require_subcommand(1);

  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel ISA: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  CalibrateOpts cal;
  auto* c_cal = app.add_subcommand("calibrate", "Compute the scale by percentile clipping and write a config");
  c_cal->add_option("--input", cal.input, "Calibration tensor (QSEF)")->required();
  c_cal->add_option("--percentile", cal.percentile, "Clip percentile in (0, 100]");
  c_cal->add_option("--fine-divisor", cal.fine_divisor, "Small-region step divisor");
  c_cal->add_option("--coarse-multiplier", cal.coarse_multiplier, "Large-region step multiplier");
  c_cal->add_option("--out", cal.out, "Output config JSON")->required();

  CodecOpts quant;
  auto* c_quant = app.add_subcommand("quantize", "Encode a QSEF tensor into a QSE1 packed file");
  c_quant->add_option("--input", quant.input, "Input tensor (QSEF)")->required();
  c_quant->add_option("--config", quant.config, "Config JSON")->required();
  c_quant->add_option("--out", quant.out, "Output packed file (QSE1)")->required();

  CodecOpts dequant;
  auto* c_dequant = app.add_subcommand("dequantize", "Decode a QSE1 packed file into a QSEF tensor");
  c_dequant->add_option("--input", dequant.input, "Packed file (QSE1)")->required();
  c_dequant->add_option("--config", dequant.config, "Optional config JSON; must match the embedded one");
  c_dequant->add_option("--out", dequant.out, "Output tensor (QSEF)")->required();

  EvalOpts ev;
  auto* c_eval = app.add_subcommand("eval", "Compare soft-edge and INT8 fake quantization");
  c_eval->add_option("--input", ev.input, "Input tensor (QSEF)")->required();
  c_eval->add_option("--config", ev.config, "Config JSON")->required();
  c_eval->add_option("--format", ev.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  c_eval->add_option("--out", ev.out, "Report path (stdout when omitted)");

  SynthOpts syn;
  auto* c_syn = app.add_subcommand("synth", "Generate a synthetic activation tensor");
  c_syn->add_option("--dist", syn.dist, "gaussian, outlier_mixture, student_t or lognormal");
  c_syn->add_option("--n", syn.spec.n, "Element count")->required();
  c_syn->add_option("--seed", syn.spec.seed, "PRNG seed")->required();
  c_syn->add_option("--mean", syn.spec.mean);
  c_syn->add_option("--std", syn.spec.std);
  c_syn->add_option("--outlier-fraction", syn.spec.outlier_fraction);
  c_syn->add_option("--outlier-low", syn.spec.outlier_low);
  c_syn->add_option("--outlier-high", syn.spec.outlier_high);
  c_syn->add_option("--dof", syn.spec.degrees_of_freedom, "Student-t degrees of freedom");
  c_syn->add_option("--out", syn.out, "Output tensor (QSEF)")->required();

  SsmOpts ssm;
  auto* c_ssm = app.add_subcommand("ssm", "Propagate input quantization error through a diagonal SSM");
  c_ssm->add_option("--seq-len", ssm.seq_len, "Sequence length T (generated input)");
  c_ssm->add_option("--state-dim", ssm.state_dim, "State dimension N");
  c_ssm->add_option("--seed", ssm.seed, "Seed for parameters and generated input");
  c_ssm->add_option("--input", ssm.input, "Use this QSEF tensor as input instead of generating one");
  c_ssm->add_option("--config", ssm.config, "Config JSON (calibrated from the input when omitted)");
  c_ssm->add_option("--percentile", ssm.percentile, "Calibration percentile when --config is omitted");
  c_ssm->add_option("--a-low", ssm.a_low, "Lower bound of decay coefficients");
  c_ssm->add_option("--a-high", ssm.a_high, "Upper bound of decay coefficients");
  c_ssm->add_option("--std", ssm.input_spec.std, "Generated input: Gaussian std");
  c_ssm->add_option("--outlier-fraction", ssm.input_spec.outlier_fraction);
  c_ssm->add_option("--outlier-low", ssm.input_spec.outlier_low);
  c_ssm->add_option("--outlier-high", ssm.input_spec.outlier_high);
  c_ssm->add_option("--report", ssm.report, "Output report JSON")->required();

  SweepOpts sw;
  auto* c_sweep = app.add_subcommand("sweep", "Grid over percentiles, divisors and multipliers");
  c_sweep->add_option("--input", sw.input, "Input tensor (QSEF)")->required();
  c_sweep->add_option("--percentiles", sw.percentiles)->delimiter(',');
  c_sweep->add_option("--fine-divisors", sw.fine_divisors)->delimiter(',');
  c_sweep->add_option("--coarse-multipliers", sw.coarse_multipliers)->delimiter(',');
  c_sweep->add_option("--out", sw.out, "Output CSV (stdout when omitted)");

  TraceOpts tr;
  auto* c_trace = app.add_subcommand("trace", "Print the quantizer datapath signals for one value");
  c_trace->add_option("--value", tr.value, "Input value")->required();
  c_trace->add_option("--config", tr.config, "Config JSON");
  c_trace->add_option("--scale", tr.scale, "Scale with default thresholds when --config is omitted");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  if (isa != "auto") {
    if (!kernels::force_isa(isa == "avx2" ? kernels::Isa::Avx2 : kernels::Isa::Scalar)) {
      err << "error: ISA '" << isa << "' is not available on this machine\n";
      return kValidationError;
    }
  }

  int rc = kInternalError;
  try {
    if (*c_cal) rc = cmd_calibrate(cal, out);
    else if (*c_quant) rc = cmd_quantize(quant, out);
    else if (*c_dequant) rc = cmd_dequantize(dequant, out);
    else if (*c_eval) rc = cmd_eval(ev, out);
    else if (*c_syn) rc = cmd_synth(syn, out);
    else if (*c_ssm) rc = cmd_ssm(ssm, out);
    else if (*c_sweep) rc = cmd_sweep(sw, out);
    else if (*c_trace) rc = cmd_trace(tr, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    rc = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    rc = kInternalError;
  }
  if (isa != "auto") kernels::reset_isa();
  return rc;
}

}  // namespace softedge::cli
