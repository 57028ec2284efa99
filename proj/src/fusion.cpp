#include "walksense/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace walksense {

void validate(const FusionConfig& cfg) {
  if (!(cfg.min_contour_area > 0.0)) {
    throw std::invalid_argument("fusion config: min_contour_area must be positive");
  }
  if (!(cfg.zeta > 0.0) || cfg.zeta > 1.0) {
    throw std::invalid_argument("fusion config: zeta must be in (0, 1]");
  }
  if (cfg.close_kernel < 1) {
    throw std::invalid_argument("fusion config: close_kernel must be >= 1");
  }
  if (cfg.direction_band_deg < 0.0) {
    throw std::invalid_argument("fusion config: direction_band_deg must be non-negative");
  }
}

double scaled_min_area(const FusionConfig& cfg, int width, int height) {
  return cfg.min_contour_area * (static_cast<double>(width) * height) / (640.0 * 480.0);
}

const char* to_string(DirectionBucket bucket) {
  switch (bucket) {
    case DirectionBucket::left_front: return "left-front";
    case DirectionBucket::front: return "front";
    case DirectionBucket::right_front: return "right-front";
  }
  return "?";
}

DirectionBucket direction_bucket(double theta_h_deg, double band_deg) {
  if (theta_h_deg < -band_deg) return DirectionBucket::left_front;
  if (theta_h_deg > band_deg) return DirectionBucket::right_front;
  return DirectionBucket::front;
}

Mask remove_ground(const DepthFrame& depth, const GroundResult& ground,
                   const CameraIntrinsics& k, const Attitude& att, double sigma,
                   double max_range) {
  if (ground.cls == GroundClass::non_ground || !ground.plane) {
    throw std::invalid_argument("remove_ground: no ground plane available");
  }
  const GroundPlane plane = *ground.plane;

  Mask mask(depth.width, depth.height);
  const PointCloud cloud = reconstruct_pointcloud(depth, k, att);
  for (const Point3& p : cloud) {
    if (p.z >= max_range) continue;
    if (signed_distance(plane, p) > sigma) mask.set(p.u, p.v);
  }
  return mask;
}

namespace {

double min_valid_depth(const std::vector<Pixel>& pixels, const DepthFrame& depth) {
  double best = 0.0;
  for (const Pixel& px : pixels) {
    const double z = depth.at(px.first, px.second);
    if (z > 0.0 && (best == 0.0 || z < best)) best = z;
  }
  return best;  // 0 when the region holds no valid depth
}

double region_depth_at_centroid(const std::vector<Pixel>& pixels, double cx, double cy,
                                const DepthFrame& depth) {
  const int px = static_cast<int>(std::lround(cx));
  const int py = static_cast<int>(std::lround(cy));
  if (depth.in_bounds(px, py)) {
    const double z = depth.at(px, py);
    if (z > 0.0) return z;
  }
  return min_valid_depth(pixels, depth);
}

// The merged pixel set can be disconnected; the outline is traced on its
// biggest piece.
std::vector<Pixel> largest_connected_part(const std::vector<Pixel>& pixels) {
  if (pixels.empty()) return {};
  int min_x = pixels[0].first, max_x = pixels[0].first;
  int min_y = pixels[0].second, max_y = pixels[0].second;
  for (const Pixel& p : pixels) {
    min_x = std::min(min_x, p.first);
    max_x = std::max(max_x, p.first);
    min_y = std::min(min_y, p.second);
    max_y = std::max(max_y, p.second);
  }
  Mask local(max_x - min_x + 1, max_y - min_y + 1);
  for (const Pixel& p : pixels) local.set(p.first - min_x, p.second - min_y);

  std::vector<Component> parts = connected_components(local);
  const Component* biggest = &parts.front();
  for (const Component& part : parts) {
    if (part.pixels.size() > biggest->pixels.size()) biggest = &part;
  }
  std::vector<Pixel> out;
  out.reserve(biggest->pixels.size());
  for (const Pixel& p : biggest->pixels) out.push_back({p.first + min_x, p.second + min_y});
  return out;
}

// Minimum Euclidean distance between two region boundaries.
double boundary_distance(const std::vector<Pixel>& a, const std::vector<Pixel>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pixel& pa : a) {
    for (const Pixel& pb : b) {
      const double dx = pa.first - pb.first;
      const double dy = pa.second - pb.second;
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

}  // namespace

std::vector<Component> filter_small_components(std::vector<Component> comps, double min_area,
                                               double radius) {
  std::vector<Component> survivors;
  std::vector<Component> small;
  for (Component& comp : comps) {
    if (static_cast<double>(comp.pixels.size()) >= min_area) {
      survivors.push_back(std::move(comp));
    } else {
      small.push_back(std::move(comp));
    }
  }

  // Distances are measured against the original survivor outlines, so
  // merge order does not matter.
  std::vector<std::vector<Pixel>> survivor_boundaries(survivors.size());
  for (std::size_t s = 0; s < survivors.size(); ++s) {
    survivor_boundaries[s] = trace_boundary(survivors[s].pixels);
  }
  for (const Component& comp : small) {
    const std::vector<Pixel> small_boundary = trace_boundary(comp.pixels);
    double best_dist = std::numeric_limits<double>::infinity();
    int best_s = -1;
    for (std::size_t s = 0; s < survivors.size(); ++s) {
      const double d = boundary_distance(small_boundary, survivor_boundaries[s]);
      if (d < best_dist) {
        best_dist = d;
        best_s = static_cast<int>(s);
      }
    }
    if (best_s >= 0 && best_dist <= radius) {
      Component& target = survivors[best_s];
      for (const Pixel& px : comp.pixels) {
        target.min_x = std::min(target.min_x, px.first);
        target.max_x = std::max(target.max_x, px.first);
        target.min_y = std::min(target.min_y, px.second);
        target.max_y = std::max(target.max_y, px.second);
        target.pixels.push_back(px);
      }
    }
  }
  return survivors;
}

std::vector<ObstacleContour> close_and_extract_contours(const Mask& mask,
                                                        const DepthFrame& depth,
                                                        const FusionConfig& cfg) {
  if (mask.width != depth.width || mask.height != depth.height) {
    throw std::invalid_argument("close_and_extract_contours: mask/depth dimension mismatch");
  }
  const double min_area = scaled_min_area(cfg, mask.width, mask.height);

  const Mask closed = morph_close(mask, cfg.close_kernel);
  std::vector<Component> survivors = filter_small_components(
      connected_components(closed), min_area, static_cast<double>(cfg.close_kernel));

  std::vector<ObstacleContour> contours;
  contours.reserve(survivors.size());
  for (Component& comp : survivors) {
    ObstacleContour contour;
    contour.boundary = trace_boundary(largest_connected_part(comp.pixels));
    contour.min_x = comp.min_x;
    contour.min_y = comp.min_y;
    contour.max_x = comp.max_x;
    contour.max_y = comp.max_y;
    contour.pixels = std::move(comp.pixels);
    contour.area = static_cast<double>(contour.pixels.size());
    const auto [cx, cy] = region_centroid(contour.pixels);
    contour.centroid_x = cx;
    contour.centroid_y = cy;
    contour.z_center = region_depth_at_centroid(contour.pixels, cx, cy, depth);
    if (contour.z_center <= 0.0) continue;  // closing artifact with no valid depth
    contours.push_back(std::move(contour));
  }
  return contours;
}

std::pair<double, double> contour_centroid(const std::vector<Pixel>& region) {
  return region_centroid(region);
}

ObstacleLocation locate_obstacle(const ObstacleContour& contour, const DepthFrame& depth,
                                 const CameraIntrinsics& k) {
  const double z = region_depth_at_centroid(contour.pixels, contour.centroid_x,
                                            contour.centroid_y, depth);
  if (z <= 0.0) {
    throw std::runtime_error("locate_obstacle: contour has no valid depth");
  }
  ObstacleLocation loc;
  loc.theta_h_deg = std::atan((contour.centroid_x - k.u0) / k.fx) * 180.0 / M_PI;
  loc.theta_v_deg = std::atan((contour.centroid_y - k.v0) / k.fy) * 180.0 / M_PI;
  loc.z = z;
  return loc;
}

Mask map_detection_to_depth(const Detection2D& det, const Extrinsics& ext,
                            const CameraIntrinsics& k_rgb, const CameraIntrinsics& k_depth,
                            const DepthFrame& depth) {
  // Depth pixels are lifted to 3-D, moved into the RGB camera, and tested
  // against the box; this avoids guessing depths for RGB pixels.
  const Eigen::Matrix3d r_inv = ext.r.transpose();
  Mask region(depth.width, depth.height);
  int hits = 0;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const double z = depth.at(u, v);
      if (z <= 0.0) continue;
      const Eigen::Vector3d p_depth(z * (u - k_depth.u0) / k_depth.fx,
                                    -z * (v - k_depth.v0) / k_depth.fy, z);
      const Eigen::Vector3d p_rgb = r_inv * (p_depth - ext.t);
      if (!(p_rgb.z() > 0.0)) continue;
      const double ur = k_rgb.u0 + k_rgb.fx * p_rgb.x() / p_rgb.z();
      const double vr = k_rgb.v0 - k_rgb.fy * p_rgb.y() / p_rgb.z();
      if (ur >= det.x && ur < det.x + det.w && vr >= det.y && vr < det.y + det.h) {
        region.set(u, v);
        ++hits;
      }
    }
  }
  if (hits == 0) {
    throw std::runtime_error("map_detection_to_depth: mapped region empty for label '" +
                             det.label + "'");
  }
  return region;
}

std::vector<FusedObject> fuse_detections(
    const std::vector<std::pair<Detection2D, Mask>>& regions,
    const std::vector<ObstacleContour>& contours, const DepthFrame& depth,
    const FusionConfig& cfg, const CameraIntrinsics& k) {
  struct Candidate {
    double ratio;
    int det;
    int contour;
  };
  std::vector<Candidate> candidates;
  std::vector<std::vector<Pixel>> intersections(regions.size() * contours.size());

  for (int di = 0; di < static_cast<int>(regions.size()); ++di) {
    const Mask& a = regions[di].second;
    const double area_a = a.count();
    for (int ci = 0; ci < static_cast<int>(contours.size()); ++ci) {
      std::vector<Pixel>& c = intersections[di * contours.size() + ci];
      for (const Pixel& px : contours[ci].pixels) {
        if (a.in_bounds(px.first, px.second) && a.at(px.first, px.second)) c.push_back(px);
      }
      const double denom = std::max(area_a, contours[ci].area);
      if (denom <= 0.0) continue;
      const double ratio = static_cast<double>(c.size()) / denom;
      if (ratio >= cfg.zeta) candidates.push_back({ratio, di, ci});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    if (a.det != b.det) return a.det < b.det;
    return a.contour < b.contour;
  });

  std::vector<FusedObject> fused;
  std::vector<char> det_used(regions.size(), 0);
  std::vector<char> contour_used(contours.size(), 0);
  for (const Candidate& cand : candidates) {
    if (det_used[cand.det] || contour_used[cand.contour]) continue;
    const std::vector<Pixel>& c = intersections[cand.det * contours.size() + cand.contour];

    FusedObject obj;
    obj.label = regions[cand.det].first.label;
    obj.intersection_ratio = cand.ratio;

    double dist = min_valid_depth(c, depth);
    const auto [cx, cy] = region_centroid(c);
    double z_at_centroid = 0.0;
    {
      const int px = static_cast<int>(std::lround(cx));
      const int py = static_cast<int>(std::lround(cy));
      if (depth.in_bounds(px, py)) z_at_centroid = depth.at(px, py);
      if (z_at_centroid <= 0.0) z_at_centroid = dist;
    }
    if (dist <= 0.0) {
      // no valid depth inside C; fall back to the contour's depth
      dist = contours[cand.contour].z_center;
      z_at_centroid = dist;
    }
    obj.distance = dist;
    obj.location.theta_h_deg = std::atan((cx - k.u0) / k.fx) * 180.0 / M_PI;
    obj.location.theta_v_deg = std::atan((cy - k.v0) / k.fy) * 180.0 / M_PI;
    obj.location.z = z_at_centroid;
    obj.bucket = direction_bucket(obj.location.theta_h_deg, cfg.direction_band_deg);

    det_used[cand.det] = 1;
    contour_used[cand.contour] = 1;
    fused.push_back(std::move(obj));
  }

  for (int ci = 0; ci < static_cast<int>(contours.size()); ++ci) {
    if (contour_used[ci]) continue;
    FusedObject obj;
    obj.label = "obstacle";
    obj.location = locate_obstacle(contours[ci], depth, k);
    obj.distance = contours[ci].z_center;
    obj.bucket = direction_bucket(obj.location.theta_h_deg, cfg.direction_band_deg);
    fused.push_back(std::move(obj));
  }
  return fused;
}

}  // namespace walksense
