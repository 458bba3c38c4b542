#pragma once

#include <cstddef>
#include <vector>

#include "gensplat/error.hpp"

namespace gensplat {

/// Row-major float image, values nominally in [0,1], layout [v][u][c].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.f)
      : height(h), width(w), channels(c), data(size_t(h) * w * c, fill) {
    if (h <= 0 || w <= 0 || c <= 0) throw InvalidInputError("Image: non-positive dimensions");
  }

  float& at(int v, int u, int c) { return data[(size_t(v) * width + u) * channels + c]; }
  float at(int v, int u, int c) const { return data[(size_t(v) * width + u) * channels + c]; }

  size_t size() const { return data.size(); }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

}  // namespace gensplat
