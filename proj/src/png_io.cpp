#include "gensplat/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>

#include "gensplat/fsio.hpp"

namespace gensplat {

namespace {

struct ByteReader {
  const std::string* bytes;
  size_t pos = 0;
};

void read_fn(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<ByteReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->bytes->size()) png_error(png, "truncated PNG stream");
  std::memcpy(out, r->bytes->data() + r->pos, n);
  r->pos += n;
}

void write_fn(png_structp png, png_bytep src, png_size_t n) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(src), n);
}

void flush_fn(png_structp) {}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  std::string bytes = read_bytes(path);
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8))
    throw FormatError("not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw LoadError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw LoadError("png_create_info_struct failed");
  }

  std::vector<png_bytep> rows;
  std::vector<unsigned char> buf;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG: " + path.string());
  }

  ByteReader reader{&bytes, 0};
  png_set_read_fn(png, &reader, read_fn);
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);

  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  buf.resize(size_t(h) * w * 3);
  rows.resize(h);
  for (png_uint_32 v = 0; v < h; ++v) rows[v] = buf.data() + size_t(v) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(int(h), int(w), 3);
  for (size_t i = 0; i < img.size(); ++i) img.data[i] = buf[i] / 255.f;
  return img;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  if (img.channels != 1 && img.channels != 3)
    throw InvalidInputError("write_png: expected 1 or 3 channels");

  std::vector<unsigned char> buf(img.size());
  for (size_t i = 0; i < img.size(); ++i) {
    float v = img.data[i];
    v = v < 0.f ? 0.f : (v > 1.f ? 1.f : v);
    buf[i] = static_cast<unsigned char>(std::lround(v * 255.f));
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw LoadError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw LoadError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw LoadError("PNG encode failed for " + path.string());
  }

  std::string out;
  png_set_write_fn(png, &out, write_fn, flush_fn);
  png_set_IHDR(png, info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v)
    rows[v] = buf.data() + size_t(v) * img.width * img.channels;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  write_bytes_atomic(path, out);
}

}  // namespace gensplat
