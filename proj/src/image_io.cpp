#include "walksense/image_io.hpp"

#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace walksense {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path.string());
}

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void mem_read_fn(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->size) png_error(png, "png read past end of buffer");
  std::memcpy(out, r->data + r->pos, n);
  r->pos += n;
}

void mem_write_fn(png_structp png, png_bytep data, png_size_t n) {
  auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  buf->insert(buf->end(), data, data + n);
}

void mem_flush_fn(png_structp) {}

// One write path for all formats: bit_depth 8/16, channels 1/3.
void write_png(const std::filesystem::path* path, std::vector<std::uint8_t>* mem, int width,
               int height, int bit_depth, int channels, const std::uint8_t* rows_base,
               std::size_t row_stride) {
  FilePtr file;
  if (path) {
    file.reset(std::fopen(path->c_str(), "wb"));
    if (!file) fail(*path, "cannot open for writing");
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write error");
  }

  if (path) {
    png_init_io(png, file.get());
  } else {
    png_set_write_fn(png, mem, mem_write_fn, mem_flush_fn);
  }

  const int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);  // in-memory values are host little-endian

  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(rows_base + static_cast<std::size_t>(y) * row_stride);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
  std::vector<std::uint8_t> bytes;  // row-major, host endianness for 16-bit
};

DecodedPng read_png(const std::filesystem::path* path, const std::uint8_t* data,
                    std::size_t size, int want_bit_depth, int want_channels) {
  FilePtr file;
  MemoryReader reader{data, size, 0};
  if (path) {
    file.reset(std::fopen(path->c_str(), "rb"));
    if (!file) fail(*path, "cannot open for reading");
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng read error (corrupt or truncated image)");
  }

  if (path) {
    png_init_io(png, file.get());
  } else {
    png_set_read_fn(png, &reader, mem_read_fn);
  }
  png_read_info(png, info);

  int bit_depth = png_get_bit_depth(png, info);
  int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
    color = PNG_COLOR_TYPE_RGB;
  }
  if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    bit_depth = 8;
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (want_channels == 3 && (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)) {
    png_set_gray_to_rgb(png);
  }
  if (want_bit_depth == 8 && bit_depth == 16) png_set_strip_16(png);
  if (bit_depth == 16) png_set_swap(png);
  png_read_update_info(png, info);

  DecodedPng out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  out.channels = png_get_channels(png, info);
  if (out.bit_depth != want_bit_depth || out.channels != want_channels) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("unexpected png format (want " + std::to_string(want_bit_depth) +
                             "-bit x" + std::to_string(want_channels) + ", got " +
                             std::to_string(out.bit_depth) + "-bit x" +
                             std::to_string(out.channels) + ")");
  }

  const std::size_t row_stride =
      static_cast<std::size_t>(out.width) * out.channels * (out.bit_depth / 8);
  out.bytes.resize(row_stride * out.height);
  std::vector<png_bytep> rows(out.height);
  for (int y = 0; y < out.height; ++y) rows[y] = out.bytes.data() + y * row_stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace

void write_png_gray16(const std::filesystem::path& path, const GrayImage16& img) {
  write_png(&path, nullptr, img.width, img.height, 16, 1,
            reinterpret_cast<const std::uint8_t*>(img.values.data()),
            static_cast<std::size_t>(img.width) * 2);
}

GrayImage16 read_png_gray16(const std::filesystem::path& path) {
  DecodedPng d = read_png(&path, nullptr, 0, 16, 1);
  GrayImage16 img;
  img.width = d.width;
  img.height = d.height;
  img.values.resize(static_cast<std::size_t>(d.width) * d.height);
  std::memcpy(img.values.data(), d.bytes.data(), d.bytes.size());
  return img;
}

void write_png_rgb8(const std::filesystem::path& path, const RgbFrame& img) {
  write_png(&path, nullptr, img.width, img.height, 8, 3, img.rgb.data(),
            static_cast<std::size_t>(img.width) * 3);
}

RgbFrame read_png_rgb8(const std::filesystem::path& path) {
  DecodedPng d = read_png(&path, nullptr, 0, 8, 3);
  RgbFrame img;
  img.width = d.width;
  img.height = d.height;
  img.rgb = std::move(d.bytes);
  return img;
}

void write_png_mask(const std::filesystem::path& path, const Mask& mask) {
  std::vector<std::uint8_t> bytes(mask.data.size());
  for (std::size_t i = 0; i < mask.data.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
  write_png(&path, nullptr, mask.width, mask.height, 8, 1, bytes.data(),
            static_cast<std::size_t>(mask.width));
}

Mask read_png_mask(const std::filesystem::path& path) {
  DecodedPng d = read_png(&path, nullptr, 0, 8, 1);
  Mask mask(d.width, d.height);
  for (std::size_t i = 0; i < d.bytes.size(); ++i) mask.data[i] = d.bytes[i] ? 1 : 0;
  return mask;
}

std::vector<std::uint8_t> encode_png_rgb8(const RgbFrame& img) {
  std::vector<std::uint8_t> out;
  write_png(nullptr, &out, img.width, img.height, 8, 3, img.rgb.data(),
            static_cast<std::size_t>(img.width) * 3);
  return out;
}

RgbFrame decode_png_rgb8(const std::uint8_t* data, std::size_t size) {
  DecodedPng d = read_png(nullptr, data, size, 8, 3);
  RgbFrame img;
  img.width = d.width;
  img.height = d.height;
  img.rgb = std::move(d.bytes);
  return img;
}

}  // namespace walksense
