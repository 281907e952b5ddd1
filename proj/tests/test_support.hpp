#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "softedge/tensor.hpp"

namespace softedge::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("softedge_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Test-side randomness deliberately uses the standard library engine, not the
// library's own generator.
inline FloatTensor uniform_tensor(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return FloatTensor(std::move(v));
}

/// Random positive binary32 scale in [2^-8, 2^8).
inline double random_float_scale(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(-8.0, 8.0);
  return static_cast<float>(std::exp2(e(rng)));
}

}  // namespace softedge::testing
