#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace walksense {

using Pixel = std::pair<int, int>;  // (x, y)

/// Binary raster, row-major, values 0/1.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  int count() const;
};

/// Morphological closing (dilate then erode) with a square structuring
/// element of the given radius. Pixels outside the image never block the
/// erosion, which keeps the operation idempotent on the clipped grid.
Mask morph_close(const Mask& mask, int radius);

Mask dilate(const Mask& mask, int radius);
Mask erode(const Mask& mask, int radius);

/// 8-connected components in row-major discovery order. Pixel lists are
/// sorted row-major.
struct Component {
  std::vector<Pixel> pixels;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};
std::vector<Component> connected_components(const Mask& mask);

/// Mean pixel position (M10/M00, M01/M00) of a filled region.
/// Throws std::invalid_argument on an empty region.
std::pair<double, double> region_centroid(const std::vector<Pixel>& pixels);

/// Outer boundary of an 8-connected region by Moore neighbor tracing,
/// returned as an ordered pixel polygon. A single pixel yields itself.
std::vector<Pixel> trace_boundary(const std::vector<Pixel>& pixels);

}  // namespace walksense
