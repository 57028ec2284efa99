#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "walksense/geometry.hpp"
#include "walksense/mask.hpp"

namespace walksense {

/// Raw 16-bit single-channel raster, the on-disk form of depth frames
/// (values in millimeters before depth_scale is applied).
struct GrayImage16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;
};

void write_png_gray16(const std::filesystem::path& path, const GrayImage16& img);
GrayImage16 read_png_gray16(const std::filesystem::path& path);

void write_png_rgb8(const std::filesystem::path& path, const RgbFrame& img);
RgbFrame read_png_rgb8(const std::filesystem::path& path);

/// Masks are stored as 8-bit grayscale with 0/255 values.
void write_png_mask(const std::filesystem::path& path, const Mask& mask);
Mask read_png_mask(const std::filesystem::path& path);

/// In-memory PNG round trip for the remote-detector wire format.
std::vector<std::uint8_t> encode_png_rgb8(const RgbFrame& img);
RgbFrame decode_png_rgb8(const std::uint8_t* data, std::size_t size);

}  // namespace walksense
