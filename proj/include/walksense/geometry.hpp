#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace walksense {

/// Pinhole intrinsics of one camera. `depth_scale` converts raw depth
/// raster units to meters (0.001 for the usual 16-bit millimeter rasters).
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  double depth_scale = 0.001;
};

/// Throws std::invalid_argument if the intrinsics are unusable for a
/// width x height raster (non-positive focals/scale, principal point
/// outside the image rectangle).
void validate(const CameraIntrinsics& k, int width, int height);

/// IMU-measured camera attitude, radians. Pitch rotates about the camera
/// X axis (positive pitch tips the view downward), roll about the Z axis.
struct Attitude {
  double pitch = 0.0;
  double roll = 0.0;
};

/// Depth raster in meters, row-major. A value of exactly 0 marks an
/// invalid pixel (hole); everything else must be positive and finite.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<float> values;
  std::int64_t frame_index = 0;

  float at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
  bool in_bounds(int u, int v) const { return u >= 0 && u < width && v >= 0 && v < height; }
};

/// Interleaved 8-bit RGB raster, row-major.
struct RgbFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  std::int64_t frame_index = 0;
};

/// World-frame point. The world frame is centered at the camera with Y
/// pointing up (against gravity) and Z along the user's facing direction;
/// X completes the frame on the +u pixel side. (u, v) is the source pixel
/// when the point came from a depth raster, (-1, -1) otherwise.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  int u = -1;
  int v = -1;
};

using PointCloud = std::vector<Point3>;

/// Gravity-alignment rotation: Rz(roll) * Rx(pitch), applied to camera
/// rays to produce world coordinates.
Eigen::Matrix3d attitude_rotation(const Attitude& att);

/// Back-projects one pixel at depth z (meters) into the world frame.
/// Pixel v grows downward while world Y grows upward, so the vertical
/// ray component is negated.
Point3 reconstruct_pixel(double u, double v, double z, const CameraIntrinsics& k,
                         const Attitude& att);

/// Back-projects every valid pixel (z > 0) in raster order. Invalid
/// pixels are skipped, so the cloud can be smaller than width*height.
/// Throws std::invalid_argument on frame/intrinsics mismatch.
PointCloud reconstruct_pointcloud(const DepthFrame& depth, const CameraIntrinsics& k,
                                  const Attitude& att);

struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;
};

/// Inverse of reconstruct_pixel. Throws std::domain_error when the point
/// lies behind the camera after the inverse attitude rotation.
PixelDepth project_pixel(const Point3& p, const CameraIntrinsics& k, const Attitude& att);

}  // namespace walksense
