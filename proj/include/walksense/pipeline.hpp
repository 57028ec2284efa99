#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "walksense/config.hpp"
#include "walksense/dataset.hpp"
#include "walksense/detector.hpp"
#include "walksense/feedback.hpp"
#include "walksense/metrics.hpp"

namespace walksense {

struct StageTimings {
  std::int64_t acquire_us = 0;
  std::int64_t ground_us = 0;
  std::int64_t direction_us = 0;
  std::int64_t detect_us = -1;  // -1 when 2.5-D detection did not run
};

struct FrameOutput {
  std::int64_t frame = 0;
  GroundResult ground;
  std::optional<DirectionDecision> decision;
  std::vector<FusedObject> objects;  // filled on trigger frames
  std::vector<FeedbackEvent> events;
  StageTimings timings;
};

struct PipelineResult {
  std::vector<FrameOutput> frames;
  std::vector<std::string> warnings;
};

/// Processes every dataset frame in order: ground detection, direction
/// search, navigation feedback; 2.5-D detection plus speech on the
/// configured trigger frames. Detections come from the replay file or the
/// remote endpoint in `source`.
PipelineResult run_pipeline(const Dataset& ds, const EngineConfig& cfg,
                            const DetectionSource& source);

/// One JSON line per event: frame, kind, payload, and the frame's
/// per-stage elapsed microseconds.
void write_event_stream(std::ostream& out, const PipelineResult& result);

/// Series of detected ground masks for evaluation. `temporal` keeps the
/// height state across frames; the baseline resets it every frame, which
/// reduces detection to a memoryless per-frame RANSAC fit. The per-frame
/// seed is shared so the two variants differ only through the state.
struct GroundMaskSeries {
  std::vector<Mask> masks;
  std::vector<double> heights;  // NaN on non_ground frames
  std::vector<GroundClass> classes;
};

GroundMaskSeries compute_ground_masks(const std::vector<DepthFrame>& depths,
                                      const std::vector<Attitude>& attitudes,
                                      const CameraIntrinsics& k, const GroundConfig& cfg,
                                      bool temporal, std::uint64_t seed);

GroundMaskSeries compute_ground_masks(const Dataset& ds, const GroundConfig& cfg, bool temporal,
                                      std::uint64_t seed);

}  // namespace walksense
