#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace softedge {

/// 1-D activation tensor. Values are held in binary64; files store binary32.
class FloatTensor {
 public:
  FloatTensor() = default;
  explicit FloatTensor(std::vector<double> values) : values_(std::move(values)) {}
  FloatTensor(std::initializer_list<double> values) : values_(values) {}
  explicit FloatTensor(std::size_t n) : values_(n, 0.0) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }
  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }

  std::span<const double> view() const noexcept { return values_; }
  std::span<double> view() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const FloatTensor&, const FloatTensor&) = default;

 private:
  std::vector<double> values_;
};

/// Index of the first NaN/Inf element, or size() when all are finite.
std::size_t first_non_finite(std::span<const double> values) noexcept;

/// Bitwise equality (distinguishes +0/-0, compares NaN payloads).
bool bitwise_equal(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace softedge
