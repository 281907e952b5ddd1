#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "softedge/codec.hpp"
#include "softedge/tensor.hpp"

namespace softedge::io {

// QSEF: "QSEF" | 0x01 | 3 zero bytes | u64 count | count x binary32, all LE.
inline constexpr std::size_t kQsefHeaderSize = 16;
// QSE1: "QSE1" | 0x01 | 3 zero bytes | u64 count | 5 x binary64 config
//       | ceil(n/8) flag bitmap | n code bytes, all LE.
inline constexpr std::size_t kQse1HeaderSize = 16 + 5 * 8;
inline constexpr std::uint8_t kFormatVersion = 0x01;

std::vector<std::uint8_t> encode_qsef(const FloatTensor& t);
FloatTensor decode_qsef(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_qse1(const QuantizedTensor& q);
QuantizedTensor decode_qse1(std::span<const std::uint8_t> bytes);

FloatTensor read_tensor(const std::string& path);
std::size_t write_tensor(const std::string& path, const FloatTensor& t);

QuantizedTensor read_packed(const std::string& path);
std::size_t write_packed(const std::string& path, const QuantizedTensor& q);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace softedge::io
