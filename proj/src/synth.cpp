#include "walksense/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "walksense/detector.hpp"

namespace walksense {

using nlohmann::json;

void validate(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    throw std::invalid_argument("scene spec: resolution must be positive");
  }
  if (spec.noise_sigma < 0.0) {
    throw std::invalid_argument("scene spec: noise_sigma must be non-negative");
  }
  if (spec.frame_count < 1) {
    throw std::invalid_argument("scene spec: frame_count must be >= 1");
  }
  if (!(spec.max_depth > 0.0)) {
    throw std::invalid_argument("scene spec: max_depth must be positive");
  }
  validate(spec.intrinsics, spec.width, spec.height);
  for (const ScenePrimitive& p : spec.primitives) {
    if (!(p.half_size.minCoeff() > 0.0)) {
      throw std::invalid_argument("scene spec: primitive half_size must be positive");
    }
  }
}

SceneSpec parse_scene_spec(const std::string& json_text) {
  json j = json::parse(json_text);
  SceneSpec spec;
  spec.width = j.value("width", spec.width);
  spec.height = j.value("height", spec.height);
  spec.intrinsics.fx = j.value("fx", spec.intrinsics.fx);
  spec.intrinsics.fy = j.value("fy", spec.intrinsics.fy);
  spec.intrinsics.u0 = j.value("u0", spec.width / 2.0);
  spec.intrinsics.v0 = j.value("v0", spec.height / 2.0);
  spec.ground_height = j.value("ground_height", spec.ground_height);
  spec.ground_slope_deg = j.value("ground_slope_deg", spec.ground_slope_deg);
  spec.pitch_deg = j.value("pitch_deg", spec.pitch_deg);
  spec.roll_deg = j.value("roll_deg", spec.roll_deg);
  spec.pitch_rate_deg = j.value("pitch_rate_deg", spec.pitch_rate_deg);
  spec.roll_rate_deg = j.value("roll_rate_deg", spec.roll_rate_deg);
  spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
  spec.max_depth = j.value("max_depth", spec.max_depth);
  spec.frame_count = j.value("frame_count", spec.frame_count);

  for (const json& pj : j.value("primitives", json::array())) {
    ScenePrimitive prim;
    prim.label = pj.value("label", prim.label);
    const auto vec3 = [&](const char* key, Eigen::Vector3d fallback) {
      if (!pj.contains(key)) return fallback;
      const json& a = pj.at(key);
      if (!a.is_array() || a.size() != 3) {
        throw std::invalid_argument(std::string("scene spec: primitive '") + key +
                                    "' must be a 3-element array");
      }
      return Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
    };
    prim.center = vec3("center", prim.center);
    prim.half_size = vec3("half_size", prim.half_size);
    prim.velocity = vec3("velocity", prim.velocity);
    prim.first_frame = pj.value("first_frame", prim.first_frame);
    prim.last_frame = pj.value("last_frame", prim.last_frame);
    spec.primitives.push_back(std::move(prim));
  }
  validate(spec);
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open scene spec: " + json_path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scene_spec(text);
}

Mask RenderedFrame::ground_truth_mask() const {
  Mask mask(depth.width, depth.height);
  for (std::size_t i = 0; i < hit.size(); ++i) mask.data[i] = hit[i] == kHitGround ? 1 : 0;
  return mask;
}

Mask RenderedFrame::primitive_mask(int index) const {
  Mask mask(depth.width, depth.height);
  for (std::size_t i = 0; i < hit.size(); ++i) mask.data[i] = hit[i] == index ? 1 : 0;
  return mask;
}

namespace {

// Slab intersection with a ray from the origin; returns the entry
// parameter when the box is hit in front of the camera.
std::optional<double> intersect_aabb(const Eigen::Vector3d& dir, const Eigen::Vector3d& lo,
                                     const Eigen::Vector3d& hi) {
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double d = dir[axis];
    if (std::abs(d) < 1e-15) {
      if (0.0 < lo[axis] || 0.0 > hi[axis]) return std::nullopt;
      continue;
    }
    double t0 = lo[axis] / d;
    double t1 = hi[axis] / d;
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return std::nullopt;
  }
  if (t_exit < 0.0) return std::nullopt;
  if (t_enter < 0.0) return std::nullopt;  // origin inside, handled by the caller check
  return t_enter;
}

}  // namespace

RenderedFrame render_frame(const SceneSpec& spec, std::int64_t frame, Rng& rng) {
  RenderedFrame out;
  out.attitude.pitch = (spec.pitch_deg + spec.pitch_rate_deg * frame) * M_PI / 180.0;
  out.attitude.roll = (spec.roll_deg + spec.roll_rate_deg * frame) * M_PI / 180.0;
  out.depth.width = spec.width;
  out.depth.height = spec.height;
  out.depth.frame_index = frame;
  out.depth.values.assign(static_cast<std::size_t>(spec.width) * spec.height, 0.0f);
  out.hit.assign(out.depth.values.size(), kHitNone);

  struct ActiveBox {
    int index;
    Eigen::Vector3d lo, hi;
  };
  std::vector<ActiveBox> boxes;
  for (int i = 0; i < static_cast<int>(spec.primitives.size()); ++i) {
    const ScenePrimitive& prim = spec.primitives[i];
    if (!prim.active_at(frame)) continue;
    const Eigen::Vector3d c = prim.center_at(frame);
    const Eigen::Vector3d lo = c - prim.half_size;
    const Eigen::Vector3d hi = c + prim.half_size;
    if ((lo.array() < 0.0).all() && (hi.array() > 0.0).all()) {
      throw std::invalid_argument("scene spec: camera inside primitive '" + prim.label +
                                  "' at frame " + std::to_string(frame));
    }
    boxes.push_back({i, lo, hi});
  }

  const Eigen::Matrix3d rot = attitude_rotation(out.attitude);
  Eigen::Matrix3d kinv_flipped;
  kinv_flipped << 1.0 / spec.intrinsics.fx, 0.0, -spec.intrinsics.u0 / spec.intrinsics.fx,
      0.0, -1.0 / spec.intrinsics.fy, spec.intrinsics.v0 / spec.intrinsics.fy,
      0.0, 0.0, 1.0;
  const Eigen::Matrix3d ray_matrix = rot * kinv_flipped;

  const double slope_tan = std::tan(spec.ground_slope_deg * M_PI / 180.0);

  std::size_t idx = 0;
  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u, ++idx) {
      const Eigen::Vector3d dir = ray_matrix * Eigen::Vector3d(u, v, 1.0);

      double best_t = std::numeric_limits<double>::infinity();
      int best_hit = kHitNone;

      // ground plane y = h + tan(slope) * z
      const double denom = dir.y() - slope_tan * dir.z();
      if (std::abs(denom) > 1e-15) {
        const double t = spec.ground_height / denom;
        if (t > 0.0 && t < best_t) {
          best_t = t;
          best_hit = kHitGround;
        }
      }
      for (const ActiveBox& box : boxes) {
        const auto t = intersect_aabb(dir, box.lo, box.hi);
        if (t && *t > 0.0 && *t < best_t) {
          best_t = *t;
          best_hit = box.index;
        }
      }
      if (best_hit == kHitNone) continue;

      double z = best_t;  // dir has unit camera-z, so t is the raster depth
      if (spec.noise_sigma > 0.0) z += rng.gaussian(0.0, spec.noise_sigma);
      if (z <= 0.0 || z > spec.max_depth) continue;

      out.depth.values[idx] = static_cast<float>(z);
      out.hit[idx] = best_hit;
    }
  }
  return out;
}

std::vector<PrimitiveBox> primitive_boxes(const RenderedFrame& frame, const SceneSpec& spec) {
  struct Extent {
    int min_x = std::numeric_limits<int>::max();
    int min_y = std::numeric_limits<int>::max();
    int max_x = -1, max_y = -1;
    double min_depth = std::numeric_limits<double>::infinity();
  };
  std::vector<Extent> extents(spec.primitives.size());

  std::size_t idx = 0;
  for (int v = 0; v < frame.depth.height; ++v) {
    for (int u = 0; u < frame.depth.width; ++u, ++idx) {
      const int h = frame.hit[idx];
      if (h < 0) continue;
      Extent& e = extents[h];
      e.min_x = std::min(e.min_x, u);
      e.max_x = std::max(e.max_x, u);
      e.min_y = std::min(e.min_y, v);
      e.max_y = std::max(e.max_y, v);
      if (frame.depth.values[idx] > 0.0f) {
        e.min_depth = std::min(e.min_depth, static_cast<double>(frame.depth.values[idx]));
      }
    }
  }

  std::vector<PrimitiveBox> boxes;
  for (int i = 0; i < static_cast<int>(extents.size()); ++i) {
    const Extent& e = extents[i];
    if (e.max_x < 0) continue;
    PrimitiveBox box;
    box.prim = i;
    box.label = spec.primitives[i].label;
    box.x = e.min_x;
    box.y = e.min_y;
    box.w = e.max_x - e.min_x + 1;
    box.h = e.max_y - e.min_y + 1;
    box.min_depth = std::isfinite(e.min_depth) ? e.min_depth : 0.0;
    boxes.push_back(std::move(box));
  }
  return boxes;
}

namespace {

RgbFrame shade_rgb(const RenderedFrame& frame, const SceneSpec& spec) {
  // depth-shaded render with a distinct tint per primitive; cosmetic only
  static const std::uint8_t palette[6][3] = {{230, 80, 80},  {80, 190, 80},  {90, 110, 230},
                                             {220, 190, 60}, {200, 90, 200}, {80, 200, 200}};
  RgbFrame rgb;
  rgb.width = frame.depth.width;
  rgb.height = frame.depth.height;
  rgb.frame_index = frame.depth.frame_index;
  rgb.rgb.assign(static_cast<std::size_t>(rgb.width) * rgb.height * 3, 0);
  for (std::size_t i = 0; i < frame.hit.size(); ++i) {
    const int h = frame.hit[i];
    if (h == kHitNone) continue;
    const double z = frame.depth.values[i];
    const double shade = std::clamp(1.0 - z / spec.max_depth, 0.15, 1.0);
    std::uint8_t base[3] = {170, 170, 170};
    if (h >= 0) {
      base[0] = palette[h % 6][0];
      base[1] = palette[h % 6][1];
      base[2] = palette[h % 6][2];
    }
    for (int c = 0; c < 3; ++c) {
      rgb.rgb[i * 3 + c] = static_cast<std::uint8_t>(base[c] * shade);
    }
  }
  return rgb;
}

}  // namespace

void generate_synthetic_scene(const SceneSpec& spec, std::uint64_t seed,
                              const std::filesystem::path& out_dir, bool emit_detections) {
  validate(spec);
  DatasetWriter writer(out_dir, spec.intrinsics, Extrinsics{});
  Rng rng(seed);

  std::vector<Detection2D> detections;
  std::ofstream objects(out_dir / "truth" / "objects.ndrec");

  for (std::int64_t f = 0; f < spec.frame_count; ++f) {
    const RenderedFrame frame = render_frame(spec, f, rng);

    GrayImage16 depth_mm;
    depth_mm.width = frame.depth.width;
    depth_mm.height = frame.depth.height;
    depth_mm.values.resize(frame.depth.values.size());
    for (std::size_t i = 0; i < frame.depth.values.size(); ++i) {
      const double mm = std::round(frame.depth.values[i] / spec.intrinsics.depth_scale);
      depth_mm.values[i] =
          static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
    }

    DatasetFrameMeta meta;
    meta.timestamp_us = f * 33333;
    meta.pitch_deg = spec.pitch_deg + spec.pitch_rate_deg * f;
    meta.roll_deg = spec.roll_deg + spec.roll_rate_deg * f;

    const Mask truth = frame.ground_truth_mask();
    writer.add_frame(f, depth_mm, shade_rgb(frame, spec), meta, &truth);

    for (const PrimitiveBox& box : primitive_boxes(frame, spec)) {
      json j;
      j["frame"] = f;
      j["prim"] = box.prim;
      j["label"] = box.label;
      j["bbox"] = {box.x, box.y, box.w, box.h};
      j["min_depth"] = box.min_depth;
      objects << j.dump() << "\n";

      if (emit_detections) {
        Detection2D det;
        det.frame_index = f;
        det.label = box.label;
        det.score = 0.9;
        det.x = box.x;
        det.y = box.y;
        det.w = box.w;
        det.h = box.h;
        detections.push_back(std::move(det));
      }
    }
  }
  if (emit_detections) writer.write_detections(detections);
}

}  // namespace walksense
