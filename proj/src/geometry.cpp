#include "walksense/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace walksense {

void validate(const CameraIntrinsics& k, int width, int height) {
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) {
    throw std::invalid_argument("intrinsics: focal lengths must be positive");
  }
  if (!(k.depth_scale > 0.0)) {
    throw std::invalid_argument("intrinsics: depth_scale must be positive");
  }
  if (k.u0 < 0.0 || k.u0 >= width || k.v0 < 0.0 || k.v0 >= height) {
    throw std::invalid_argument("intrinsics: principal point (" + std::to_string(k.u0) + ", " +
                                std::to_string(k.v0) + ") outside " + std::to_string(width) +
                                "x" + std::to_string(height) + " image");
  }
}

Eigen::Matrix3d attitude_rotation(const Attitude& att) {
  const double ca = std::cos(att.pitch);
  const double sa = std::sin(att.pitch);
  const double cg = std::cos(att.roll);
  const double sg = std::sin(att.roll);

  Eigen::Matrix3d rz;
  rz << cg, -sg, 0.0,
        sg,  cg, 0.0,
       0.0, 0.0, 1.0;
  Eigen::Matrix3d rx;
  rx << 1.0, 0.0, 0.0,
        0.0,  ca, -sa,
        0.0,  sa,  ca;
  return rz * rx;
}

namespace {

// E * Kinv with the vertical ray component negated (pixel v grows down,
// world Y grows up). Third row of Kinv is (0,0,1), so the camera-frame z
// of a reconstructed point equals the raster depth value.
Eigen::Matrix3d reconstruction_matrix(const CameraIntrinsics& k, const Attitude& att) {
  Eigen::Matrix3d kinv_flipped;
  kinv_flipped << 1.0 / k.fx, 0.0, -k.u0 / k.fx,
                  0.0, -1.0 / k.fy, k.v0 / k.fy,
                  0.0, 0.0, 1.0;
  return attitude_rotation(att) * kinv_flipped;
}

}  // namespace

Point3 reconstruct_pixel(double u, double v, double z, const CameraIntrinsics& k,
                         const Attitude& att) {
  const Eigen::Matrix3d m = reconstruction_matrix(k, att);
  const Eigen::Vector3d w = z * (m * Eigen::Vector3d(u, v, 1.0));
  return Point3{w.x(), w.y(), w.z(), -1, -1};
}

PointCloud reconstruct_pointcloud(const DepthFrame& depth, const CameraIntrinsics& k,
                                  const Attitude& att) {
  if (depth.width <= 0 || depth.height <= 0 ||
      depth.values.size() != static_cast<std::size_t>(depth.width) * depth.height) {
    throw std::invalid_argument("depth frame dimensions inconsistent with value count");
  }
  validate(k, depth.width, depth.height);

  const Eigen::Matrix3d m = reconstruction_matrix(k, att);
  PointCloud cloud;
  cloud.reserve(depth.values.size());
  std::size_t idx = 0;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u, ++idx) {
      const double z = depth.values[idx];
      if (z <= 0.0) continue;
      const Eigen::Vector3d ray = m * Eigen::Vector3d(u, v, 1.0);
      cloud.push_back(Point3{z * ray.x(), z * ray.y(), z * ray.z(), u, v});
    }
  }
  return cloud;
}

PixelDepth project_pixel(const Point3& p, const CameraIntrinsics& k, const Attitude& att) {
  const Eigen::Vector3d q =
      attitude_rotation(att).transpose() * Eigen::Vector3d(p.x, p.y, p.z);
  if (!(q.z() > 0.0)) {
    throw std::domain_error("project_pixel: point behind camera");
  }
  return PixelDepth{k.u0 + k.fx * q.x() / q.z(),
                    k.v0 - k.fy * q.y() / q.z(),
                    q.z()};
}

}  // namespace walksense
