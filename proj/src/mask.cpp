#include "walksense/mask.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace walksense {

int Mask::count() const {
  int n = 0;
  for (std::uint8_t v : data) n += v != 0;
  return n;
}

namespace {

// Separable sliding max/min along one axis; a square structuring element
// is the composition of the two passes.
Mask run_filter(const Mask& in, int radius, bool horizontal, bool take_max) {
  Mask out(in.width, in.height);
  const int outer_n = horizontal ? in.height : in.width;
  const int inner_n = horizontal ? in.width : in.height;
  for (int o = 0; o < outer_n; ++o) {
    for (int i = 0; i < inner_n; ++i) {
      const int lo = std::max(i - radius, 0);
      const int hi = std::min(i + radius, inner_n - 1);
      bool acc = !take_max;
      for (int j = lo; j <= hi; ++j) {
        const bool v = horizontal ? in.at(j, o) : in.at(o, j);
        if (take_max) {
          acc = acc || v;
          if (acc) break;
        } else {
          acc = acc && v;
          if (!acc) break;
        }
      }
      if (horizontal) {
        out.set(i, o, acc);
      } else {
        out.set(o, i, acc);
      }
    }
  }
  return out;
}

}  // namespace

Mask dilate(const Mask& mask, int radius) {
  if (radius <= 0) return mask;
  return run_filter(run_filter(mask, radius, true, true), radius, false, true);
}

Mask erode(const Mask& mask, int radius) {
  if (radius <= 0) return mask;
  return run_filter(run_filter(mask, radius, true, false), radius, false, false);
}

Mask morph_close(const Mask& mask, int radius) { return erode(dilate(mask, radius), radius); }

std::vector<Component> connected_components(const Mask& mask) {
  std::vector<Component> comps;
  std::vector<std::uint8_t> seen(mask.data.size(), 0);
  std::vector<Pixel> stack;

  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
      if (!mask.data[idx] || seen[idx]) continue;

      Component comp;
      comp.min_x = comp.max_x = x;
      comp.min_y = comp.max_y = y;
      seen[idx] = 1;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        comp.pixels.push_back({cx, cy});
        comp.min_x = std::min(comp.min_x, cx);
        comp.max_x = std::max(comp.max_x, cx);
        comp.min_y = std::min(comp.min_y, cy);
        comp.max_y = std::max(comp.max_y, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!mask.in_bounds(nx, ny)) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
            if (mask.data[nidx] && !seen[nidx]) {
              seen[nidx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      std::sort(comp.pixels.begin(), comp.pixels.end(),
                [](const Pixel& a, const Pixel& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
                });
      comps.push_back(std::move(comp));
    }
  }
  return comps;
}

std::pair<double, double> region_centroid(const std::vector<Pixel>& pixels) {
  if (pixels.empty()) throw std::invalid_argument("region_centroid: empty region");
  std::int64_t sx = 0;
  std::int64_t sy = 0;
  for (const Pixel& p : pixels) {
    sx += p.first;
    sy += p.second;
  }
  const double n = static_cast<double>(pixels.size());
  return {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
}

std::vector<Pixel> trace_boundary(const std::vector<Pixel>& pixels) {
  if (pixels.empty()) return {};
  if (pixels.size() == 1) return pixels;

  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = std::numeric_limits<int>::min();
  int max_y = std::numeric_limits<int>::min();
  for (const Pixel& p : pixels) {
    min_x = std::min(min_x, p.first);
    max_x = std::max(max_x, p.first);
    min_y = std::min(min_y, p.second);
    max_y = std::max(max_y, p.second);
  }
  const int w = max_x - min_x + 1;
  const int h = max_y - min_y + 1;
  Mask local(w, h);
  for (const Pixel& p : pixels) local.set(p.first - min_x, p.second - min_y);

  // start at the topmost-leftmost pixel, backtrack pointing west
  Pixel start{pixels.front()};
  for (const Pixel& p : pixels) {
    if (p.second < start.second || (p.second == start.second && p.first < start.first)) start = p;
  }
  const int sx = start.first - min_x;
  const int sy = start.second - min_y;

  // clockwise Moore neighborhood starting west
  static const int dx8[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
  static const int dy8[8] = {0, -1, -1, -1, 0, 1, 1, 1};

  std::vector<Pixel> boundary;
  int cx = sx, cy = sy;
  int dir = 0;  // direction of the backtrack pixel relative to current
  boundary.push_back({cx + min_x, cy + min_y});
  const std::size_t guard = 4 * pixels.size() + 16;
  for (std::size_t step = 0; step < guard; ++step) {
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int cand = (dir + k) % 8;
      const int nx = cx + dx8[cand];
      const int ny = cy + dy8[cand];
      if (nx >= 0 && nx < w && ny >= 0 && ny < h && local.at(nx, ny)) {
        found = cand;
        break;
      }
    }
    if (found < 0) break;  // isolated pixel
    cx += dx8[found];
    cy += dy8[found];
    if (cx == sx && cy == sy) break;  // closed the loop
    boundary.push_back({cx + min_x, cy + min_y});
    dir = (found + 5) % 8;  // new backtrack: one step clockwise past the reverse direction
  }
  return boundary;
}

}  // namespace walksense
