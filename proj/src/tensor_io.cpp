#include "softedge/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "softedge/error.hpp"

namespace softedge::io {

namespace {

constexpr char kQsefMagic[4] = {'Q', 'S', 'E', 'F'};
constexpr char kQse1Magic[4] = {'Q', 'S', 'E', '1'};

// Explicit little-endian byte order keeps files identical on every host.
class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { buf_.reserve(reserve); }

  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> take(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return bytes_[pos_++]; }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void write_header(ByteWriter& w, const char (&magic)[4], std::uint64_t n) {
  w.raw(magic, 4);
  w.u8(kFormatVersion);
  w.u8(0);
  w.u8(0);
  w.u8(0);
  w.u64(n);
}

// Returns the element count.
std::uint64_t read_header(ByteReader& r, const char (&magic)[4], const char* format) {
  if (r.remaining() < 16) {
    throw Error(ErrorKind::TruncatedPayload, std::string(format) + ": file shorter than header");
  }
  auto m = r.take(4);
  if (std::memcmp(m.data(), magic, 4) != 0) {
    throw Error(ErrorKind::BadMagic, std::string(format) + ": bad magic");
  }
  if (const auto v = r.u8(); v != kFormatVersion) {
    throw Error(ErrorKind::VersionMismatch,
                std::string(format) + ": unsupported version " + std::to_string(v));
  }
  for (int i = 0; i < 3; ++i) {
    if (r.u8() != 0) throw Error(ErrorKind::BadMagic, std::string(format) + ": reserved bytes not zero");
  }
  return r.u64();
}

void require_exact_payload(const ByteReader& r, std::uint64_t n, std::uint64_t per_element,
                           std::uint64_t fixed, const char* format) {
  // Overflow-safe: n must fit before multiplying.
  const std::uint64_t avail = r.remaining();
  const bool fits = per_element == 0 || n <= (std::numeric_limits<std::uint64_t>::max() - fixed) / per_element;
  if (!fits || avail != fixed + n * per_element) {
    throw Error(ErrorKind::TruncatedPayload,
                std::string(format) + ": payload length does not match header count " +
                    std::to_string(n));
  }
}

}  // namespace

std::vector<std::uint8_t> encode_qsef(const FloatTensor& t) {
  ByteWriter w(kQsefHeaderSize + 4 * t.size());
  write_header(w, kQsefMagic, t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const float f = static_cast<float>(t[i]);
    if (!std::isfinite(f)) {
      throw Error(ErrorKind::NonFiniteValue,
                  "value at index " + std::to_string(i) + " is not finite in binary32", i);
    }
    w.f32(f);
  }
  return w.take();
}

FloatTensor decode_qsef(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const std::uint64_t n = read_header(r, kQsefMagic, "QSEF");
  require_exact_payload(r, n, 4, 0, "QSEF");
  std::vector<double> values(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const float f = r.f32();
    if (!std::isfinite(f)) {
      throw Error(ErrorKind::NonFiniteValue, "QSEF: non-finite value at index " + std::to_string(i), i);
    }
    values[i] = f;
  }
  return FloatTensor(std::move(values));
}

std::vector<std::uint8_t> encode_qse1(const QuantizedTensor& q) {
  const QuantConfig& c = q.config();
  ByteWriter w(kQse1HeaderSize + q.flag_bytes().size() + q.size());
  write_header(w, kQse1Magic, q.size());
  w.f64(c.scale);
  w.f64(c.low_threshold);
  w.f64(c.high_threshold);
  w.f64(c.fine_divisor);
  w.f64(c.coarse_multiplier);
  w.raw(q.flag_bytes().data(), q.flag_bytes().size());
  w.raw(q.code_bytes().data(), q.code_bytes().size());
  return w.take();
}

QuantizedTensor decode_qse1(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const std::uint64_t n = read_header(r, kQse1Magic, "QSE1");
  if (r.remaining() < 40) throw Error(ErrorKind::TruncatedPayload, "QSE1: truncated config block");
  QuantConfig cfg;
  cfg.scale = r.f64();
  cfg.low_threshold = r.f64();
  cfg.high_threshold = r.f64();
  cfg.fine_divisor = r.f64();
  cfg.coarse_multiplier = r.f64();
  cfg.validate();

  if (n > std::numeric_limits<std::uint64_t>::max() / 2) {
    throw Error(ErrorKind::TruncatedPayload, "QSE1: element count exceeds file size");
  }
  require_exact_payload(r, n, 1, (n + 7) / 8, "QSE1");
  auto flags = r.take((n + 7) / 8);
  auto codes = r.take(n);
  return QuantizedTensor(cfg, std::vector<std::uint8_t>(flags.begin(), flags.end()),
                         std::vector<std::uint8_t>(codes.begin(), codes.end()));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::IoFailure, "read failed for '" + path + "'");
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for '" + path + "'");
}

FloatTensor read_tensor(const std::string& path) { return decode_qsef(read_file(path)); }

std::size_t write_tensor(const std::string& path, const FloatTensor& t) {
  const auto bytes = encode_qsef(t);
  write_file(path, bytes);
  return bytes.size();
}

QuantizedTensor read_packed(const std::string& path) { return decode_qse1(read_file(path)); }

std::size_t write_packed(const std::string& path, const QuantizedTensor& q) {
  const auto bytes = encode_qse1(q);
  write_file(path, bytes);
  return bytes.size();
}

}  // namespace softedge::io
