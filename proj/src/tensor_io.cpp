#include "gensplat/tensor_io.hpp"

#include <bit>
#include <cstring>

#include "gensplat/fsio.hpp"

static_assert(std::endian::native == std::endian::little,
              "raw tensor I/O writes native byte order and assumes little-endian");

namespace gensplat {

namespace {

constexpr uint32_t kVersion = 1;
constexpr uint32_t kDtypeFloat32 = 0;

void put_u32(std::string& out, uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), 4);
}

uint32_t take_u32(const std::string& bytes, size_t& pos, const std::string& origin) {
  if (pos + 4 > bytes.size())
    throw ParseError(origin + ": truncated at byte " + std::to_string(pos));
  uint32_t v;
  std::memcpy(&v, bytes.data() + pos, 4);
  pos += 4;
  return v;
}

}  // namespace

std::string encode_tensor(const Tensor& t) {
  if (t.dims.empty()) throw InvalidInputError("tensor has no dimensions");
  if (t.data.size() != t.element_count())
    throw InvalidInputError("tensor payload size does not match dims");
  std::string out;
  out.reserve(16 + 4 * t.dims.size() + 4 * t.data.size());
  out.append("GSTF", 4);
  put_u32(out, kVersion);
  put_u32(out, uint32_t(t.dims.size()));
  for (uint32_t d : t.dims) put_u32(out, d);
  put_u32(out, kDtypeFloat32);
  out.append(reinterpret_cast<const char*>(t.data.data()), 4 * t.data.size());
  return out;
}

Tensor decode_tensor(const std::string& bytes, const std::string& origin) {
  size_t pos = 0;
  if (bytes.size() < 4 || bytes.compare(0, 4, "GSTF") != 0)
    throw ParseError(origin + ": bad magic at byte 0 (expected GSTF)");
  pos = 4;
  uint32_t version = take_u32(bytes, pos, origin);
  if (version != kVersion)
    throw FormatError(origin + ": unsupported version " + std::to_string(version));
  uint32_t ndim = take_u32(bytes, pos, origin);
  if (ndim == 0 || ndim > 8)
    throw ParseError(origin + ": implausible ndim " + std::to_string(ndim) + " at byte 8");
  Tensor t;
  t.dims.resize(ndim);
  for (uint32_t i = 0; i < ndim; ++i) t.dims[i] = take_u32(bytes, pos, origin);
  uint32_t dtype = take_u32(bytes, pos, origin);
  if (dtype != kDtypeFloat32)
    throw FormatError(origin + ": unsupported dtype code " + std::to_string(dtype));
  size_t n = t.element_count();
  if (bytes.size() - pos != 4 * n)
    throw ParseError(origin + ": payload is " + std::to_string(bytes.size() - pos) +
                     " bytes, dims require " + std::to_string(4 * n));
  t.data.resize(n);
  std::memcpy(t.data.data(), bytes.data() + pos, 4 * n);
  return t;
}

Tensor load_tensor(const std::filesystem::path& path) {
  return decode_tensor(read_bytes(path), path.string());
}

void save_tensor(const Tensor& t, const std::filesystem::path& path) {
  write_bytes_atomic(path, encode_tensor(t));
}

}  // namespace gensplat
