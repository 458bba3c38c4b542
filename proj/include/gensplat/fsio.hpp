#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gensplat/error.hpp"

namespace gensplat {

std::string read_bytes(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames into place, so readers never see
/// a half-written file.
void write_bytes_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace gensplat
