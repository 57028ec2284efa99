#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "walksense/dataset.hpp"
#include "walksense/geometry.hpp"
#include "walksense/mask.hpp"
#include "walksense/rng.hpp"

namespace walksense {

/// Axis-aligned box in the world frame (camera at the origin). Boxes,
/// tabletops, and hanging slabs are all thin or thick instances of this.
struct ScenePrimitive {
  std::string label = "obstacle";
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_size = Eigen::Vector3d::Ones();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // meters per frame
  std::int64_t first_frame = 0;
  std::int64_t last_frame = std::numeric_limits<std::int64_t>::max();

  Eigen::Vector3d center_at(std::int64_t frame) const {
    return center + velocity * static_cast<double>(frame);
  }
  bool active_at(std::int64_t frame) const {
    return frame >= first_frame && frame <= last_frame;
  }
};

struct SceneSpec {
  int width = 320;
  int height = 240;
  CameraIntrinsics intrinsics{277.0, 277.0, 160.0, 120.0, 0.001};
  double ground_height = -1.5;     // meters, world Y
  double ground_slope_deg = 0.0;   // rises along +Z when positive
  double pitch_deg = 0.0;          // attitude at frame 0
  double roll_deg = 0.0;
  double pitch_rate_deg = 0.0;     // per frame
  double roll_rate_deg = 0.0;
  double noise_sigma = 0.0;        // depth noise, meters
  double max_depth = 8.0;          // sensor range; farther rays become holes
  int frame_count = 1;
  std::vector<ScenePrimitive> primitives;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const SceneSpec& spec);

SceneSpec load_scene_spec(const std::filesystem::path& json_path);
SceneSpec parse_scene_spec(const std::string& json_text);

/// Per-pixel provenance of a rendered frame.
constexpr int kHitGround = -1;
constexpr int kHitNone = -2;

struct RenderedFrame {
  DepthFrame depth;       // meters, 0 = no hit / out of range
  std::vector<int> hit;   // kHitGround, kHitNone, or primitive index
  Attitude attitude;

  Mask ground_truth_mask() const;
  Mask primitive_mask(int index) const;
};

/// Analytic ray casting under the same camera model the engine inverts;
/// with zero noise, reconstructing a rendered ground pixel lands exactly
/// on the ground plane. Throws std::invalid_argument when the camera sits
/// inside an active primitive.
RenderedFrame render_frame(const SceneSpec& spec, std::int64_t frame, Rng& rng);

/// Pixel-extent bounding box of one primitive in a rendered frame.
struct PrimitiveBox {
  int prim = 0;
  std::string label;
  int x = 0, y = 0, w = 0, h = 0;
  double min_depth = 0.0;
};
std::vector<PrimitiveBox> primitive_boxes(const RenderedFrame& frame, const SceneSpec& spec);

/// Renders the whole sequence into the dataset layout: quantized
/// millimeter depth, shaded RGB, attitude metadata, truth ground masks,
/// analytic object records (truth/objects.ndrec), and, when requested,
/// detections.ndrec built from the analytic boxes so the pipeline can
/// replay them as a perfect 2-D detector. Deterministic per seed.
void generate_synthetic_scene(const SceneSpec& spec, std::uint64_t seed,
                              const std::filesystem::path& out_dir, bool emit_detections);

}  // namespace walksense
