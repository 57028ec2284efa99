#pragma once

// Test-only reference implementations, written independently of the
// library code paths they check. Each recomputes its answer from the
// definition by brute force.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "walksense/direction.hpp"
#include "walksense/geometry.hpp"

namespace oracles {

/// Exhaustive between-class-variance maximization over every candidate
/// split of a count histogram. Classes are bins [0,k) and [k,bins);
/// variances compare exactly via __int128 cross multiplication (valid for
/// the modest totals used in tests); ties keep the smallest k.
inline int otsu_exhaustive(const std::vector<std::int64_t>& counts) {
  const int bins = static_cast<int>(counts.size());
  int best_k = 1;
  unsigned __int128 best_num = 0;
  unsigned __int128 best_den = 1;
  bool have = false;

  for (int k = 1; k < bins; ++k) {
    std::int64_t w0 = 0, w1 = 0, s0 = 0, s1 = 0;
    for (int i = 0; i < k; ++i) {
      w0 += counts[i];
      s0 += counts[i] * i;
    }
    for (int i = k; i < bins; ++i) {
      w1 += counts[i];
      s1 += counts[i] * i;
    }
    unsigned __int128 num = 0;
    unsigned __int128 den = 1;
    if (w0 > 0 && w1 > 0) {
      const __int128 diff = static_cast<__int128>(s0) * w1 - static_cast<__int128>(s1) * w0;
      const unsigned __int128 mag =
          diff < 0 ? static_cast<unsigned __int128>(-diff) : static_cast<unsigned __int128>(diff);
      num = mag * mag;
      den = static_cast<unsigned __int128>(w0) * static_cast<unsigned __int128>(w1);
    }
    if (!have || num * best_den > best_num * den) {
      have = true;
      best_k = k;
      best_num = num;
      best_den = den;
    }
  }
  return best_k;
}

/// Same contract as otsu_height_threshold, evaluated through the
/// exhaustive split search above.
inline double otsu_threshold_exhaustive(const walksense::PointCloud& cloud, double tz,
                                        int bins) {
  std::vector<double> ys;
  for (const walksense::Point3& p : cloud) {
    if (p.z > 0.0 && p.z < tz) ys.push_back(p.y);
  }
  const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
  const double width = (*mx - *mn) / bins;
  std::vector<std::int64_t> counts(bins, 0);
  for (double y : ys) {
    int b = static_cast<int>((y - *mn) / width);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    ++counts[b];
  }
  return *mn + otsu_exhaustive(counts) * width;
}

/// Brute-force award-and-argmax scorer over a sector scan, recomputing
/// the corridor span and windowed minimum per sector from the formula.
struct DirectionChoice {
  int sector = -1;
  bool blocked = false;
  bool straight = false;
  double turn_deg = 0.0;
};

inline DirectionChoice direction_exhaustive(const std::vector<double>& nearest,
                                            const walksense::DirectionConfig& cfg) {
  const int n = static_cast<int>(nearest.size());
  const int half = n / 2;
  std::vector<double> award(n);
  for (int i = 0; i < n; ++i) {
    double arg = cfg.w_sw / nearest[i];
    if (arg > 1.0) arg = 1.0;
    const int span = static_cast<int>(std::floor(std::asin(arg) * 180.0 / M_PI / cfg.theta_deg));
    double min_z = nearest[i];
    for (int j = i; j <= i + span && j < n; ++j) min_z = std::min(min_z, nearest[j]);
    award[i] = cfg.alpha * (90.0 - cfg.theta_deg * std::abs(i - half)) + cfg.beta * min_z;
  }

  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (award[i] > award[best] ||
        (award[i] == award[best] && std::abs(i - half) < std::abs(best - half))) {
      best = i;
    }
  }
  DirectionChoice choice;
  choice.sector = best;
  choice.turn_deg = cfg.theta_deg * (best - half);
  if (nearest[best] < cfg.tau) {
    choice.blocked = true;
  } else if (std::abs(choice.turn_deg) <= cfg.straight_band_deg) {
    choice.straight = true;
  }
  return choice;
}

/// Reference plane through a known point set: linear regression of the
/// best-conditioned axis against the other two (largest scatter
/// determinant picks the axis). On near-planar data this agrees with a
/// total-least-squares fit to well below the test tolerances.
struct PlaneFit {
  double a, b, c, d;
};

inline PlaneFit plane_least_squares(const walksense::PointCloud& pts) {
  double cx = 0, cy = 0, cz = 0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
    cz += p.z;
  }
  const double n = static_cast<double>(pts.size());
  cx /= n;
  cy /= n;
  cz /= n;

  double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;
  for (const auto& p : pts) {
    const double dx = p.x - cx, dy = p.y - cy, dz = p.z - cz;
    xx += dx * dx;
    xy += dx * dy;
    xz += dx * dz;
    yy += dy * dy;
    yz += dy * dz;
    zz += dz * dz;
  }
  const double det_x = yy * zz - yz * yz;
  const double det_y = xx * zz - xz * xz;
  const double det_z = xx * yy - xy * xy;
  double a, b, c;
  if (det_x >= det_y && det_x >= det_z) {
    a = det_x;
    b = xz * yz - xy * zz;
    c = xy * yz - xz * yy;
  } else if (det_y >= det_z) {
    a = xz * yz - xy * zz;
    b = det_y;
    c = xy * xz - yz * xx;
  } else {
    a = xy * yz - xz * yy;
    b = xy * xz - yz * xx;
    c = det_z;
  }
  const double norm = std::sqrt(a * a + b * b + c * c);
  a /= norm;
  b /= norm;
  c /= norm;
  if (b < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  return PlaneFit{a, b, c, -(a * cx + b * cy + c * cz)};
}

/// Pixel-mean centroid by direct accumulation.
inline std::pair<double, double> centroid_brute_force(
    const std::vector<std::pair<int, int>>& pixels) {
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pixels) {
    sx += x;
    sy += y;
  }
  return {sx / pixels.size(), sy / pixels.size()};
}

}  // namespace oracles
