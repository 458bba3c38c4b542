#pragma once

#include <cstdint>
#include <filesystem>
#include <numeric>
#include <vector>

#include "gensplat/error.hpp"

namespace gensplat {

/// Dense row-major float32 tensor, the carrier for point maps, depths,
/// weights, and pseudo-labels.
struct Tensor {
  std::vector<uint32_t> dims;
  std::vector<float> data;

  Tensor() = default;
  Tensor(std::vector<uint32_t> d, float fill = 0.f) : dims(std::move(d)) {
    data.assign(element_count(), fill);
  }

  size_t element_count() const {
    size_t n = 1;
    for (uint32_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
  }
};

/// Byte layout: "GSTF" | version u32 | ndim u32 | dims u32[ndim] |
/// dtype u32 (0 = float32) | payload, all little-endian.
Tensor load_tensor(const std::filesystem::path& path);
void save_tensor(const Tensor& t, const std::filesystem::path& path);

std::string encode_tensor(const Tensor& t);
Tensor decode_tensor(const std::string& bytes, const std::string& origin = "<memory>");

}  // namespace gensplat
