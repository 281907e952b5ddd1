#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "softedge/calibration.hpp"
#include "softedge/codec.hpp"
#include "softedge/error.hpp"
#include "softedge/tensor_io.hpp"
#include "test_support.hpp"

namespace softedge {
namespace {

using testing::TempDir;

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected softedge::Error";
  return ErrorKind::Internal;
}

std::vector<std::uint8_t> qsef_header(std::uint64_t n) {
  std::vector<std::uint8_t> b = {'Q', 'S', 'E', 'F', 1, 0, 0, 0};
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  return b;
}

void append_f32(std::vector<std::uint8_t>& b, float f) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

TEST(Qsef, EmptyTensorIsHeaderOnly) {
  TempDir dir;
  const auto path = dir.file("empty.qsef");
  EXPECT_EQ(io::write_tensor(path, FloatTensor{}), 16U);
  EXPECT_EQ(io::read_tensor(path).size(), 0U);
}

TEST(Qsef, SingleValueIsTwentyBytes) {
  TempDir dir;
  EXPECT_EQ(io::write_tensor(dir.file("one.qsef"), FloatTensor{1.0}), 20U);
}

TEST(Qsef, ExactByteLayout) {
  // 1.0f = 0x3F800000, -2.5f = 0xC0200000, little-endian.
  const std::vector<std::uint8_t> expected = {
      'Q', 'S', 'E', 'F', 0x01, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0,
      0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x20, 0xC0, 0x00, 0x00, 0x00, 0x00};
  EXPECT_EQ(io::encode_qsef(FloatTensor{1.0, -2.5, 0.0}), expected);
}

TEST(Qsef, RoundTripsFileOrder) {
  TempDir dir;
  const auto path = dir.file("t.qsef");
  io::write_tensor(path, FloatTensor{1.0, -2.5, 0.0});
  EXPECT_EQ(io::read_tensor(path), (FloatTensor{1.0, -2.5, 0.0}));
}

TEST(Qsef, ReadBackIsBinary32Exact) {
  TempDir dir;
  const auto path = dir.file("t.qsef");
  io::write_tensor(path, FloatTensor{0.1});
  const FloatTensor t = io::read_tensor(path);
  ASSERT_EQ(t.size(), 1U);
  EXPECT_EQ(t[0], static_cast<double>(0.1f));
  EXPECT_NE(t[0], 0.1);
}

TEST(Qsef, HeaderCountLargerThanPayloadIsTruncated) {
  auto bytes = qsef_header(4);
  for (float f : {1.0f, 2.0f, 3.0f}) append_f32(bytes, f);
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::TruncatedPayload);
}

TEST(Qsef, TrailingBytesAreRejected) {
  auto bytes = qsef_header(1);
  append_f32(bytes, 1.0f);
  bytes.push_back(0);
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::TruncatedPayload);
}

TEST(Qsef, HugeHeaderCountDoesNotAllocate) {
  auto bytes = qsef_header(std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::TruncatedPayload);
}

TEST(Qsef, HeaderErrors) {
  auto bytes = qsef_header(0);
  bytes[0] = 'X';
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::BadMagic);
  bytes = qsef_header(0);
  bytes[4] = 2;
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::VersionMismatch);
  bytes = qsef_header(0);
  bytes[6] = 1;
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::BadMagic);
  bytes.resize(10);
  EXPECT_EQ(kind_of([&] { io::decode_qsef(bytes); }), ErrorKind::TruncatedPayload);
}

TEST(Qsef, NonFiniteValueReportsIndex) {
  auto bytes = qsef_header(3);
  append_f32(bytes, 1.0f);
  append_f32(bytes, 2.0f);
  append_f32(bytes, std::numeric_limits<float>::quiet_NaN());
  try {
    io::decode_qsef(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteValue);
    EXPECT_EQ(e.index(), 2U);
  }
}

TEST(Qsef, WritingNonFiniteFails) {
  EXPECT_EQ(kind_of([] { io::encode_qsef(FloatTensor{0.0, std::nan("")}); }),
            ErrorKind::NonFiniteValue);
  // Finite in binary64 but overflows binary32.
  EXPECT_EQ(kind_of([] { io::encode_qsef(FloatTensor{1e300}); }), ErrorKind::NonFiniteValue);
}

TEST(Qsef, MissingFileIsIoFailure) {
  EXPECT_EQ(kind_of([] { io::read_tensor("/nonexistent/dir/x.qsef"); }), ErrorKind::IoFailure);
  EXPECT_EQ(kind_of([] { io::write_tensor("/nonexistent/dir/x.qsef", FloatTensor{1.0}); }),
            ErrorKind::IoFailure);
}

TEST(Qsef, RandomizedRoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<std::uint32_t> bits;
  for (int c = 0; c < 10000; ++c) {
    std::vector<double> v(len(rng));
    for (auto& x : v) {
      float f;
      do {
        f = std::bit_cast<float>(bits(rng));
      } while (!std::isfinite(f));
      x = f;
    }
    const FloatTensor t(std::move(v));
    const FloatTensor back = io::decode_qsef(io::encode_qsef(t));
    ASSERT_TRUE(bitwise_equal(back.view(), t.view())) << "case " << c;
  }
}

// --- QSE1 ---

TEST(Qse1, EmptyTensorRoundTrips) {
  TempDir dir;
  const auto path = dir.file("e.qse");
  const QuantizedTensor q = encode_tensor(FloatTensor{}, derive_config(1.0));
  EXPECT_EQ(io::write_packed(path, q), io::kQse1HeaderSize);
  EXPECT_EQ(io::read_packed(path), q);
}

TEST(Qse1, NineElementsUseTwoBitmapBytesWithZeroPad) {
  const FloatTensor t{5.1, 50.3, -200.0, 0.0, 1.0, 2.0, 3.0, 100.0, 0.5};
  const QuantizedTensor q = encode_tensor(t, derive_config(1.0));
  ASSERT_EQ(q.flag_bytes().size(), 2U);
  EXPECT_EQ(q.flag_bytes()[1] & 0xFE, 0);
  const auto bytes = io::encode_qse1(q);
  EXPECT_EQ(bytes.size(), io::kQse1HeaderSize + 2 + 9);
  EXPECT_EQ(io::decode_qse1(bytes), q);
}

TEST(Qse1, ExactByteLayout) {
  const QuantizedTensor q = encode_tensor(FloatTensor{5.1, 50.3, -200.0}, derive_config(1.0));
  const auto bytes = io::encode_qse1(q);
  const std::vector<std::uint8_t> header = {'Q', 'S', 'E', '1', 1, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0};
  ASSERT_EQ(bytes.size(), 56U + 1 + 3);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  // scale = 1.0 = 0x3FF0000000000000 little-endian
  const std::vector<std::uint8_t> one = {0, 0, 0, 0, 0, 0, 0xF0, 0x3F};
  EXPECT_TRUE(std::equal(one.begin(), one.end(), bytes.begin() + 16));
  // Flags: elements 0 and 2 special -> 0b101.
  EXPECT_EQ(bytes[56], 0x05);
  EXPECT_EQ(bytes[57], 0x14);
  EXPECT_EQ(bytes[58], 50);
  EXPECT_EQ(bytes[59], 0xD2);
}

TEST(Qse1, RandomThousandElementRoundTrip) {
  std::mt19937_64 rng(1000);
  const QuantConfig cfg = derive_config(testing::random_float_scale(rng));
  const FloatTensor t = testing::uniform_tensor(rng, 1000, -500 * cfg.scale, 500 * cfg.scale);
  const QuantizedTensor q = encode_tensor(t, cfg);
  TempDir dir;
  const auto path = dir.file("r.qse");
  io::write_packed(path, q);
  EXPECT_EQ(io::read_packed(path), q);
}

TEST(Qse1, RandomizedRoundTripIsBitExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(0, 70);
  std::uniform_real_distribution<double> div(1.0, 8.0);
  for (int c = 0; c < 10000; ++c) {
    const double s = testing::random_float_scale(rng);
    const QuantConfig cfg = derive_config(s, div(rng), div(rng));
    const FloatTensor t = testing::uniform_tensor(rng, len(rng), -600 * s, 600 * s);
    const QuantizedTensor q = encode_tensor(t, cfg);
    const QuantizedTensor back = io::decode_qse1(io::encode_qse1(q));
    ASSERT_EQ(back, q) << "case " << c;
    ASSERT_TRUE(back.config().same_quantizer(cfg));
    ASSERT_TRUE(bitwise_equal(decode_tensor(back).view(), decode_tensor(q).view()));
  }
}

TEST(Qse1, RejectsCorruptPayloads) {
  const QuantizedTensor q = encode_tensor(FloatTensor{1.0, 2.0, 3.0}, derive_config(1.0));
  const auto good = io::encode_qse1(q);

  auto bad = good;
  bad[56] |= 0x80;  // pad bit
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bad); }), ErrorKind::MalformedPayload);

  bad = good;
  bad[56] |= 0x01;  // element 0 special...
  bad[57] = 0x80;   // ...with sign set, small region, m = 0
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bad); }), ErrorKind::NonCanonicalCode);

  bad = good;
  bad.pop_back();
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bad); }), ErrorKind::TruncatedPayload);

  bad = good;
  bad[3] = 'F';
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bad); }), ErrorKind::BadMagic);

  bad = good;
  bad[4] = 9;
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bad); }), ErrorKind::VersionMismatch);
}

TEST(Qse1, RejectsInvalidEmbeddedConfig) {
  const QuantizedTensor q = encode_tensor(FloatTensor{1.0}, derive_config(1.0));
  auto bytes = io::encode_qse1(q);
  auto put_f64 = [&](std::size_t off, double v) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes[off + i] = static_cast<std::uint8_t>(u >> (8 * i));
  };
  put_f64(16, 0.0);  // scale
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bytes); }), ErrorKind::InvalidConfig);
  put_f64(16, 1.0);
  put_f64(24, 200.0);  // L above H
  EXPECT_EQ(kind_of([&] { io::decode_qse1(bytes); }), ErrorKind::InvalidConfig);
}

}  // namespace
}  // namespace softedge
