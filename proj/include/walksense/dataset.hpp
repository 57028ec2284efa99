#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "walksense/fusion.hpp"
#include "walksense/geometry.hpp"
#include "walksense/image_io.hpp"

namespace walksense {

/// On-disk dataset layout:
///   intrinsics.txt            fx, fy, u0, v0, depth_scale (key = value)
///   extrinsics.txt            R = 9 row-major numbers; t = 3 numbers
///   frames/NNNNNN.depth.png   16-bit grayscale, millimeters
///   frames/NNNNNN.rgb.png     8-bit RGB
///   frames/NNNNNN.meta        timestamp_us, pitch_deg, roll_deg
///   detections.ndrec          optional replay detections
///   truth/NNNNNN.mask.png     optional ground-truth ground masks
struct DatasetFrameMeta {
  std::int64_t timestamp_us = 0;
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
};

class Dataset {
 public:
  std::filesystem::path root;
  CameraIntrinsics intrinsics;
  Extrinsics extrinsics;
  std::vector<std::int64_t> frame_indices;  // ascending

  /// Depth in meters (depth_scale applied), holes stay 0.
  DepthFrame load_depth(std::int64_t frame) const;
  RgbFrame load_rgb(std::int64_t frame) const;
  DatasetFrameMeta load_meta(std::int64_t frame) const;
  Attitude load_attitude(std::int64_t frame) const;

  bool has_truth(std::int64_t frame) const;
  Mask load_truth_mask(std::int64_t frame) const;

  std::filesystem::path detections_path() const { return root / "detections.ndrec"; }
  bool has_detections() const { return std::filesystem::exists(detections_path()); }
};

/// Scans the directory and validates the layout. Throws
/// std::runtime_error on a missing or inconsistent dataset.
Dataset open_dataset(const std::filesystem::path& root);

/// Creates the directory structure and writes shared calibration files
/// up front; frames are appended one at a time.
class DatasetWriter {
 public:
  DatasetWriter(const std::filesystem::path& root, const CameraIntrinsics& k,
                const Extrinsics& ext);

  void add_frame(std::int64_t frame, const GrayImage16& depth_mm, const RgbFrame& rgb,
                 const DatasetFrameMeta& meta, const Mask* truth_mask);
  void write_detections(const std::vector<Detection2D>& detections);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

std::string frame_stem(std::int64_t frame);  // zero-padded six digits

}  // namespace walksense
