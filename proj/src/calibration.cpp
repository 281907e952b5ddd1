#include "softedge/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "softedge/error.hpp"

namespace softedge {

double percentile_abs(const FloatTensor& t, double p) {
  if (t.empty()) throw Error(ErrorKind::EmptyTensor, "empty calibration tensor");
  if (!(p > 0.0 && p <= 100.0)) {
    throw Error(ErrorKind::PercentileOutOfRange, "percentile must be in (0, 100]");
  }
  if (auto bad = first_non_finite(t.view()); bad != t.size()) {
    throw Error(ErrorKind::NonFiniteInput, "non-finite calibration value", bad);
  }

  std::vector<double> w(t.size());
  std::transform(t.begin(), t.end(), w.begin(), [](double v) { return std::fabs(v); });

  const double rank = (p / 100.0) * static_cast<double>(w.size() - 1);
  const auto k = static_cast<std::size_t>(std::floor(rank));
  const double frac = rank - static_cast<double>(k);

  std::nth_element(w.begin(), w.begin() + k, w.end());
  const double lo = w[k];
  if (frac == 0.0 || k + 1 >= w.size()) return lo;
  // Everything after position k is >= w[k]; the next order statistic is their min.
  const double hi = *std::min_element(w.begin() + k + 1, w.end());
  return lo + frac * (hi - lo);
}

double calibrate_scale(const FloatTensor& t, double p) {
  const double clip = percentile_abs(t, p);
  if (clip == 0.0) {
    throw Error(ErrorKind::DegenerateRange, "calibration clip point is zero (all-zero data?)");
  }
  // Stored in binary32 so every 16s / 127s boundary reconstruction is exact.
  const float scale = static_cast<float>(clip / 127.0);
  if (!std::isnormal(scale)) {
    throw Error(ErrorKind::DegenerateRange, "calibrated scale is not a normal binary32 value");
  }
  return scale;
}

QuantConfig derive_config(double scale, double fine_divisor, double coarse_multiplier,
                          std::optional<double> percentile,
                          std::optional<std::uint64_t> calib_count) {
  QuantConfig cfg;
  cfg.scale = scale;
  cfg.fine_divisor = fine_divisor;
  cfg.coarse_multiplier = coarse_multiplier;
  // Small region saturates at 63 fine steps, so L sits at the 64th.
  cfg.low_threshold = 64.0 * (scale / fine_divisor);
  cfg.high_threshold = 127.0 * scale;
  cfg.percentile = percentile;
  cfg.calib_count = calib_count;
  cfg.validate();
  return cfg;
}

QuantConfig calibrate(const FloatTensor& t, double p, double fine_divisor,
                      double coarse_multiplier) {
  const double scale = calibrate_scale(t, p);
  return derive_config(scale, fine_divisor, coarse_multiplier, p, t.size());
}

}  // namespace softedge
