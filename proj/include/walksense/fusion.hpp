#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "walksense/geometry.hpp"
#include "walksense/ground.hpp"
#include "walksense/mask.hpp"

namespace walksense {

struct FusionConfig {
  double min_contour_area = 300.0;  // px^2 at 640x480, scaled by resolution ratio
  double zeta = 0.7;                // intersection-ratio gate
  int close_kernel = 2;             // square structuring-element radius, pixels
  double direction_band_deg = 5.0;  // |theta_h| <= band reports "front"
};

/// Throws std::invalid_argument naming the offending field.
void validate(const FusionConfig& cfg);

/// min_contour_area is calibrated for 640x480; scale it with pixel count.
double scaled_min_area(const FusionConfig& cfg, int width, int height);

/// Rigid mapping from RGB-camera coordinates to depth-camera coordinates.
struct Extrinsics {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
};

/// One 2-D detector output box, RGB pixel coordinates.
struct Detection2D {
  std::string label;
  double score = 0.0;
  int x = 0, y = 0, w = 0, h = 0;
  std::int64_t frame_index = 0;
};

/// Depth-image obstacle region after closing and area filtering.
struct ObstacleContour {
  std::vector<Pixel> pixels;    // filled region, row-major
  std::vector<Pixel> boundary;  // outer boundary polygon of the core component
  double area = 0.0;            // pixel count
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  double z_center = 0.0;        // meters
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

/// Angular position plus metric distance of one obstacle.
struct ObstacleLocation {
  double theta_h_deg = 0.0;  // atan((x - u0)/fx); negative is the user's left
  double theta_v_deg = 0.0;  // atan((y - v0)/fy); positive is below center
  double z = 0.0;            // meters
};

enum class DirectionBucket { left_front, front, right_front };

const char* to_string(DirectionBucket bucket);

/// Closed center band: |theta_h| <= band maps to front.
DirectionBucket direction_bucket(double theta_h_deg, double band_deg);

/// Category detection joined with a depth contour (or a bare contour when
/// no detection matched; those carry label "obstacle" and no ratio).
struct FusedObject {
  std::string label;
  double distance = 0.0;  // meters
  ObstacleLocation location;
  DirectionBucket bucket = DirectionBucket::front;
  std::optional<double> intersection_ratio;
};

/// Obstacle mask: 1 where depth is valid, within max_range, and the
/// reconstructed point sits more than sigma above the ground plane.
/// Pixels beyond max_range are treated like holes (depth is not trusted
/// there and the plane extrapolation error grows with distance). Throws
/// std::invalid_argument when ground is non_ground.
Mask remove_ground(const DepthFrame& depth, const GroundResult& ground,
                   const CameraIntrinsics& k, const Attitude& att, double sigma,
                   double max_range);

/// Morphological closing, connected components, and the small-component
/// rule: a component under the area threshold is merged into the nearest
/// surviving component when their boundary distance is within the closing
/// radius, otherwise dropped as noise.
std::vector<ObstacleContour> close_and_extract_contours(const Mask& mask,
                                                        const DepthFrame& depth,
                                                        const FusionConfig& cfg);

/// The small-component rule on its own: components with fewer than
/// min_area pixels either join the nearest >= min_area component (when
/// their boundary distance is <= radius) or disappear. Survivors keep
/// their own pixels first, merged pixels appended.
std::vector<Component> filter_small_components(std::vector<Component> comps, double min_area,
                                               double radius);

/// Moment centroid (M10/M00, M01/M00) of a filled pixel region.
std::pair<double, double> contour_centroid(const std::vector<Pixel>& region);

/// Angles from the contour centroid through the pinhole model; z is the
/// depth at the centroid pixel, falling back to the minimum non-zero
/// depth inside the contour. Throws std::runtime_error when the whole
/// contour has no valid depth.
ObstacleLocation locate_obstacle(const ObstacleContour& contour, const DepthFrame& depth,
                                 const CameraIntrinsics& k);

/// Depth-frame pixel region whose points land inside the RGB bounding box
/// after the extrinsic mapping. Throws std::runtime_error when the mapped
/// region is empty.
Mask map_detection_to_depth(const Detection2D& det, const Extrinsics& ext,
                            const CameraIntrinsics& k_rgb, const CameraIntrinsics& k_depth,
                            const DepthFrame& depth);

/// Intersection-ratio fusion: a (detection region A, contour B) pair with
/// S_C / max(S_A, S_B) >= zeta is fused one-to-one (highest ratio first).
/// Fused distance is the minimum non-zero depth inside C; unmatched
/// contours are still reported as label "obstacle".
std::vector<FusedObject> fuse_detections(
    const std::vector<std::pair<Detection2D, Mask>>& regions,
    const std::vector<ObstacleContour>& contours, const DepthFrame& depth,
    const FusionConfig& cfg, const CameraIntrinsics& k);

}  // namespace walksense
