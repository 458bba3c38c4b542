#pragma once

#include <filesystem>

#include "gensplat/image.hpp"

namespace gensplat {

/// Decodes an 8/16-bit gray/palette/RGB/RGBA PNG to a 3-channel float image
/// in [0,1] (alpha stripped, 16-bit narrowed to 8).
Image read_png(const std::filesystem::path& path);

/// Encodes a 1- or 3-channel float image as an 8-bit PNG. Values are clamped
/// to [0,1] and rounded; the write is atomic (temp file + rename).
void write_png(const Image& img, const std::filesystem::path& path);

}  // namespace gensplat
