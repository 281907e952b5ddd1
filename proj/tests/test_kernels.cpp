#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "softedge/calibration.hpp"
#include "softedge/codec.hpp"
#include "softedge/kernels.hpp"
#include "softedge/metrics.hpp"
#include "softedge/ssm.hpp"
#include "test_support.hpp"

namespace softedge {
namespace {

using kernels::CodecParams;
using kernels::KernelTable;

CodecParams params_of(const QuantConfig& c) {
  return {c.scale, c.low_threshold, c.high_threshold, c.fine_step(), c.coarse_step()};
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    simd_ = kernels::avx2_kernels();
    if (simd_ == nullptr) GTEST_SKIP() << "AVX2 kernels unavailable on this machine";
  }
  const KernelTable& ref() const { return kernels::scalar_kernels(); }
  const KernelTable& simd() const { return *simd_; }

  const KernelTable* simd_ = nullptr;
};

// Random values plus every boundary and tie the codec cares about.
std::vector<double> adversarial_inputs(std::mt19937_64& rng, const QuantConfig& cfg, std::size_t n) {
  std::vector<double> v = testing::uniform_tensor(rng, n, -600 * cfg.scale, 600 * cfg.scale).values();
  const double s = cfg.scale;
  std::vector<double> special = {0.0, -0.0, cfg.low_threshold, cfg.high_threshold,
                                 std::nextafter(cfg.low_threshold, 0.0),
                                 std::nextafter(cfg.high_threshold, 1e300),
                                 0.5 * cfg.fine_step(), 0.5 * s, 16.5 * s, 126.5 * s, 127.5 * s,
                                 cfg.high_threshold + 0.5 * cfg.coarse_step(), 1e300, 1e-300,
                                 5e-324, 3.0 * s, 64.0 * cfg.fine_step()};
  std::uniform_int_distribution<std::size_t> pos(0, n - 1);
  for (double x : special) {
    v[pos(rng)] = x;
    v[pos(rng)] = -x;
  }
  // Quantized values themselves (fixed points of fake quant).
  for (int i = 0; i < 64 && i < static_cast<int>(n); ++i) {
    v[pos(rng)] = se_decode(se_encode(v[i], cfg), cfg);
  }
  return v;
}

std::vector<QuantConfig> configs(std::mt19937_64& rng) {
  std::vector<QuantConfig> out = {derive_config(1.0), derive_config(0.1), derive_config(1.0, 3.0, 6.5),
                                  derive_config(1e-3, 1.0, 1.0)};
  for (int i = 0; i < 6; ++i) out.push_back(derive_config(testing::random_float_scale(rng)));
  QuantConfig odd = derive_config(2.0);
  odd.low_threshold = 0.7;  // medium codes can round to zero here
  odd.high_threshold = 55.3;
  out.push_back(odd);
  return out;
}

TEST_F(SimdEquivalence, FakeQuantBothPaths) {
  std::mt19937_64 rng(1);
  for (const QuantConfig& cfg : configs(rng)) {
    const auto p = params_of(cfg);
    for (std::size_t n : {1UL, 3UL, 4UL, 7UL, 8UL, 9UL, 31UL, 1000UL, 4099UL}) {
      const auto in = adversarial_inputs(rng, cfg, n);
      std::vector<double> a(n), b(n);
      ref().fake_quant_soft_edge(in, a, p);
      simd().fake_quant_soft_edge(in, b, p);
      ASSERT_TRUE(bitwise_equal(a, b)) << "soft_edge n=" << n << " scale=" << cfg.scale;
      ref().fake_quant_int8(in, a, p);
      simd().fake_quant_int8(in, b, p);
      ASSERT_TRUE(bitwise_equal(a, b)) << "int8 n=" << n << " scale=" << cfg.scale;
    }
  }
}

TEST_F(SimdEquivalence, EncodeCodesAndFlags) {
  std::mt19937_64 rng(2);
  for (const QuantConfig& cfg : configs(rng)) {
    const auto p = params_of(cfg);
    for (std::size_t n : {0UL, 1UL, 7UL, 8UL, 9UL, 16UL, 17UL, 1001UL}) {
      const auto in = n ? adversarial_inputs(rng, cfg, n) : std::vector<double>{};
      std::vector<std::uint8_t> ca(n), cb(n), fa(bitmap_bytes(n), 0xAA), fb(bitmap_bytes(n), 0x55);
      ref().encode_soft_edge(in, ca, fa, p);
      simd().encode_soft_edge(in, cb, fb, p);
      ASSERT_EQ(ca, cb) << "n=" << n;
      ASSERT_EQ(fa, fb) << "n=" << n;
    }
  }
}

TEST_F(SimdEquivalence, DecodeEveryCode) {
  std::mt19937_64 rng(3);
  for (const QuantConfig& cfg : configs(rng)) {
    const auto p = params_of(cfg);
    std::vector<std::uint8_t> codes;
    std::vector<std::uint8_t> flags;
    for (int flag = 0; flag < 2; ++flag) {
      for (int b = 0; b < 256; ++b) {
        const SoftEdgeCode c{flag == 1, static_cast<std::uint8_t>(b)};
        if (c.se_flag && !c.canonical()) continue;
        const std::size_t i = codes.size();
        codes.push_back(c.byte);
        if (i % 8 == 0) flags.push_back(0);
        if (c.se_flag) flags.back() |= static_cast<std::uint8_t>(1U << (i % 8));
      }
    }
    std::vector<double> a(codes.size()), b(codes.size());
    ref().decode_soft_edge(codes, flags, a, p);
    simd().decode_soft_edge(codes, flags, b, p);
    ASSERT_TRUE(bitwise_equal(a, b)) << "scale=" << cfg.scale;
  }
}

TEST_F(SimdEquivalence, LeafSums) {
  std::mt19937_64 rng(4);
  for (std::size_t n : {0UL, 1UL, 2UL, 3UL, 4UL, 5UL, 255UL, 256UL, 1000UL}) {
    const auto a = testing::uniform_tensor(rng, n, -1e3, 1e3).values();
    const auto b = testing::uniform_tensor(rng, n, -1e3, 1e3).values();
    EXPECT_EQ(std::bit_cast<std::uint64_t>(ref().leaf_sum_squares(a)),
              std::bit_cast<std::uint64_t>(simd().leaf_sum_squares(a)));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(ref().leaf_sum_squared_diff(a, b)),
              std::bit_cast<std::uint64_t>(simd().leaf_sum_squared_diff(a, b)));
  }
}

TEST_F(SimdEquivalence, SsmScan) {
  std::mt19937_64 rng(5);
  for (std::size_t dim : {1UL, 3UL, 4UL, 5UL, 16UL, 19UL}) {
    const SsmParams prm = generate_ssm_params(dim, dim * 7);
    const auto x = testing::uniform_tensor(rng, 513, -30.0, 30.0).values();
    std::vector<double> ha(dim, 0.25), hb(dim, 0.25), ya(x.size()), yb(x.size());
    ref().ssm_scan(prm.a, prm.b, prm.c, ha, x, ya);
    simd().ssm_scan(prm.a, prm.b, prm.c, hb, x, yb);
    ASSERT_TRUE(bitwise_equal(ya, yb)) << "dim=" << dim;
    ASSERT_TRUE(bitwise_equal(ha, hb)) << "dim=" << dim;
  }
}

TEST_F(SimdEquivalence, PublicApiIndependentOfIsa) {
  std::mt19937_64 rng(6);
  const QuantConfig cfg = derive_config(0.2f);
  const FloatTensor t = testing::uniform_tensor(rng, 10007, -100.0, 100.0);
  const SsmParams prm = generate_ssm_params(16, 3);

  ASSERT_TRUE(kernels::force_isa(kernels::Isa::Scalar));
  const auto fq_a = fake_quant(t, cfg, Quantizer::SoftEdge);
  const auto q_a = encode_tensor(t, cfg);
  const double mse_a = mse(t, fq_a);
  const auto y_a = ssm_forward(prm, t);

  ASSERT_TRUE(kernels::force_isa(kernels::Isa::Avx2));
  const auto fq_b = fake_quant(t, cfg, Quantizer::SoftEdge);
  const auto q_b = encode_tensor(t, cfg);
  const double mse_b = mse(t, fq_b);
  const auto y_b = ssm_forward(prm, t);
  kernels::reset_isa();

  EXPECT_TRUE(bitwise_equal(fq_a.view(), fq_b.view()));
  EXPECT_EQ(q_a, q_b);
  EXPECT_EQ(mse_a, mse_b);
  EXPECT_TRUE(bitwise_equal(y_a.view(), y_b.view()));
}

TEST(Dispatch, ScalarAlwaysAvailable) {
  EXPECT_TRUE(kernels::force_isa(kernels::Isa::Scalar));
  EXPECT_EQ(kernels::active().isa, kernels::Isa::Scalar);
  kernels::reset_isa();
  if (kernels::avx2_kernels() != nullptr) {
    EXPECT_EQ(kernels::active().isa, kernels::Isa::Avx2);
  } else {
    EXPECT_FALSE(kernels::force_isa(kernels::Isa::Avx2));
  }
}

}  // namespace
}  // namespace softedge
