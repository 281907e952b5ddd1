#include "softedge/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "softedge/error.hpp"

namespace softedge {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidSpec, std::string("invalid distribution spec: ") + what);
}

// Marsaglia-Tsang. Shapes below one use the x * U^(1/shape) boost.
double gamma_draw(double shape, Xoshiro256& rng, NormalSource& normal) {
  if (shape < 1.0) {
    const double g = gamma_draw(shape + 1.0, rng, normal);
    const double u = 1.0 - rng.uniform();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = normal.next();
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = 1.0 - rng.uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

std::uint64_t Xoshiro256::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double NormalSource::next() {
  if (cached_) {
    const double z = *cached_;
    cached_.reset();
    return z;
  }
  const double u1 = 1.0 - rng_.uniform();  // (0, 1]
  const double u2 = rng_.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::string_view to_string(DistKind k) noexcept {
  switch (k) {
    case DistKind::Gaussian: return "gaussian";
    case DistKind::OutlierMixture: return "outlier_mixture";
    case DistKind::StudentT: return "student_t";
    case DistKind::LogNormal: return "lognormal";
  }
  return "?";
}

DistKind parse_dist_kind(std::string_view name) {
  for (auto k : {DistKind::Gaussian, DistKind::OutlierMixture, DistKind::StudentT, DistKind::LogNormal}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidSpec, "unknown distribution '" + std::string(name) + "'");
}

void DistSpec::validate() const {
  require(std::isfinite(mean), "mean must be finite");
  require(std::isfinite(std) && std > 0.0, "std must be > 0");
  if (kind == DistKind::OutlierMixture) {
    require(outlier_fraction >= 0.0 && outlier_fraction < 1.0, "outlier_fraction must be in [0, 1)");
    require(std::isfinite(outlier_low) && std::isfinite(outlier_high) && outlier_low >= 0.0,
            "outlier magnitudes must be finite and non-negative");
    require(outlier_low < outlier_high, "outlier_low must be < outlier_high");
  }
  if (kind == DistKind::StudentT) {
    require(std::isfinite(degrees_of_freedom) && degrees_of_freedom > 0.0,
            "degrees_of_freedom must be > 0");
  }
}

FloatTensor generate(const DistSpec& spec) {
  spec.validate();
  Xoshiro256 rng(spec.seed);
  NormalSource normal(rng);
  std::vector<double> out;
  out.reserve(spec.n);

  for (std::uint64_t i = 0; i < spec.n; ++i) {
    double v = 0.0;
    switch (spec.kind) {
      case DistKind::Gaussian:
        v = spec.mean + spec.std * normal.next();
        break;
      case DistKind::OutlierMixture:
        if (rng.uniform() < spec.outlier_fraction) {
          const double mag = spec.outlier_low + (spec.outlier_high - spec.outlier_low) * rng.uniform();
          v = (rng.next() >> 63) ? -mag : mag;
        } else {
          v = spec.mean + spec.std * normal.next();
        }
        break;
      case DistKind::StudentT: {
        const double z = normal.next();
        const double chi2 = 2.0 * gamma_draw(spec.degrees_of_freedom / 2.0, rng, normal);
        v = spec.mean + spec.std * z / std::sqrt(chi2 / spec.degrees_of_freedom);
        break;
      }
      case DistKind::LogNormal:
        v = std::exp(spec.mean + spec.std * normal.next());
        break;
    }
    out.push_back(v);
  }
  return FloatTensor(std::move(out));
}

}  // namespace softedge
