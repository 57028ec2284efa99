#include "walksense/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include <json.hpp>

#include "walksense/direction.hpp"

namespace walksense {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_us(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

std::vector<FusedObject> detect_objects(const DepthFrame& depth, const Attitude& att,
                                        const GroundResult& ground,
                                        const std::vector<Detection2D>& detections,
                                        const Dataset& ds, const EngineConfig& cfg,
                                        std::vector<std::string>& warnings) {
  const Mask obstacle_mask =
      remove_ground(depth, ground, ds.intrinsics, att, cfg.ground.sigma, cfg.ground.tz);
  const std::vector<ObstacleContour> contours =
      close_and_extract_contours(obstacle_mask, depth, cfg.fusion);

  std::vector<std::pair<Detection2D, Mask>> regions;
  for (const Detection2D& det : detections) {
    try {
      regions.emplace_back(det, map_detection_to_depth(det, ds.extrinsics, ds.intrinsics,
                                                       ds.intrinsics, depth));
    } catch (const std::runtime_error& e) {
      warnings.push_back("frame " + std::to_string(depth.frame_index) + ": " + e.what());
    }
  }
  return fuse_detections(regions, contours, depth, cfg.fusion, ds.intrinsics);
}

}  // namespace

PipelineResult run_pipeline(const Dataset& ds, const EngineConfig& cfg,
                            const DetectionSource& source) {
  validate(cfg);
  PipelineResult result;
  result.frames.reserve(ds.frame_indices.size());

  const std::set<std::int64_t> triggers(cfg.trigger_frames.begin(), cfg.trigger_frames.end());

  LoadedDetections replay;
  if (source.kind == DetectionSource::Kind::replay && !triggers.empty()) {
    // frames share one resolution per dataset, so clip against frame 0
    const RgbFrame probe = ds.load_rgb(ds.frame_indices.front());
    replay = load_detections(source.target, probe.width, probe.height);
    result.warnings.insert(result.warnings.end(), replay.warnings.begin(),
                           replay.warnings.end());
  }

  GroundState state;
  FeedbackState feedback_state;

  for (const std::int64_t frame : ds.frame_indices) {
    FrameOutput out;
    out.frame = frame;

    auto t0 = Clock::now();
    const DepthFrame depth = ds.load_depth(frame);
    const DatasetFrameMeta meta = ds.load_meta(frame);
    const Attitude att{meta.pitch_deg * M_PI / 180.0, meta.roll_deg * M_PI / 180.0};
    out.timings.acquire_us = elapsed_us(t0);

    t0 = Clock::now();
    const PointCloud cloud = reconstruct_pointcloud(depth, ds.intrinsics, att);
    out.ground = detect_ground(cloud, state, cfg.ground,
                               cfg.seed + static_cast<std::uint64_t>(frame));
    out.timings.ground_us = elapsed_us(t0);

    if (out.ground.cls == GroundClass::non_ground) {
      out.events.push_back(
          {frame, EventKind::turn_hint, "cannot move on", meta.timestamp_us});
    } else {
      t0 = Clock::now();
      const PointCloud walkable = select_walkable_points(cloud, out.ground, cfg.direction);
      const SectorScan scan = sector_nearest(walkable, cfg.direction, cfg.ground.tz);
      const std::vector<double> awards = sector_awards(scan, cfg.direction);
      out.decision = optimal_direction(scan, awards, cfg.direction);
      out.timings.direction_us = elapsed_us(t0);

      const std::vector<FeedbackEvent> nav =
          navigation_feedback(*out.decision, feedback_state, frame, meta.timestamp_us);
      out.events.insert(out.events.end(), nav.begin(), nav.end());
    }

    if (triggers.count(frame) && out.ground.cls != GroundClass::non_ground) {
      t0 = Clock::now();
      std::vector<Detection2D> detections;
      if (source.kind == DetectionSource::Kind::replay) {
        const auto it = replay.by_frame.find(frame);
        if (it != replay.by_frame.end()) detections = it->second;
      } else {
        detections = query_remote_detector(ds.load_rgb(frame), source);
      }
      out.objects = detect_objects(depth, att, out.ground, detections, ds, cfg,
                                   result.warnings);
      out.timings.detect_us = elapsed_us(t0);

      const std::vector<FeedbackEvent> speech =
          describe_objects(out.objects, frame, meta.timestamp_us);
      out.events.insert(out.events.end(), speech.begin(), speech.end());
    }

    result.frames.push_back(std::move(out));
  }
  return result;
}

void write_event_stream(std::ostream& out, const PipelineResult& result) {
  for (const FrameOutput& frame : result.frames) {
    for (const FeedbackEvent& event : frame.events) {
      json j;
      j["frame"] = event.frame_index;
      j["kind"] = to_string(event.kind);
      j["payload"] = event.payload;
      j["timestamp_us"] = event.timestamp_us;
      j["t_acquire_us"] = frame.timings.acquire_us;
      j["t_ground_us"] = frame.timings.ground_us;
      j["t_direction_us"] = frame.timings.direction_us;
      if (frame.timings.detect_us >= 0) j["t_detect_us"] = frame.timings.detect_us;
      out << j.dump() << "\n";
    }
  }
}

GroundMaskSeries compute_ground_masks(const std::vector<DepthFrame>& depths,
                                      const std::vector<Attitude>& attitudes,
                                      const CameraIntrinsics& k, const GroundConfig& cfg,
                                      bool temporal, std::uint64_t seed) {
  GroundMaskSeries series;
  series.masks.reserve(depths.size());
  GroundState state;

  for (std::size_t f = 0; f < depths.size(); ++f) {
    if (!temporal) state = GroundState{};
    const PointCloud cloud = reconstruct_pointcloud(depths[f], k, attitudes[f]);
    const GroundResult ground =
        detect_ground(cloud, state, cfg, seed + static_cast<std::uint64_t>(f));

    Mask mask(depths[f].width, depths[f].height);
    for (const Point3& p : ground.refined) {
      if (p.u >= 0) mask.set(p.u, p.v);
    }
    series.masks.push_back(std::move(mask));
    series.classes.push_back(ground.cls);
    series.heights.push_back(ground.cls == GroundClass::non_ground
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : ground.height_h);
  }
  return series;
}

GroundMaskSeries compute_ground_masks(const Dataset& ds, const GroundConfig& cfg, bool temporal,
                                      std::uint64_t seed) {
  std::vector<DepthFrame> depths;
  std::vector<Attitude> attitudes;
  depths.reserve(ds.frame_indices.size());
  for (const std::int64_t frame : ds.frame_indices) {
    depths.push_back(ds.load_depth(frame));
    attitudes.push_back(ds.load_attitude(frame));
  }
  return compute_ground_masks(depths, attitudes, ds.intrinsics, cfg, temporal, seed);
}

}  // namespace walksense
