#pragma once

#include <string>
#include <vector>

#include "walksense/geometry.hpp"
#include "walksense/mask.hpp"

namespace walksense {

/// Overlap ratio N_intersection / (N_detected + N_truth). Symmetric,
/// bounded by [0, 0.5], exactly 0.5 for identical non-empty masks, and 0
/// when both masks are empty. Throws std::invalid_argument on a
/// dimension mismatch.
double ground_iou(const Mask& detected, const Mask& truth);

struct DistanceBand {
  double lo = 0.0;
  double hi = 0.0;  // meters, pixels with depth in [lo, hi)
};

struct PrecisionCell {
  double precision = 0.0;
  int eligible_frames = 0;  // frames whose truth mask is non-empty in the band
};

/// Fraction of frames whose band-restricted overlap ratio clears each
/// threshold, for the temporal method and the memoryless baseline.
struct PrecisionReport {
  std::vector<DistanceBand> bands;
  std::vector<double> thresholds;
  std::vector<std::vector<PrecisionCell>> temporal;  // [band][threshold]
  std::vector<std::vector<PrecisionCell>> baseline;
};

/// Restricts detected and truth masks to pixels whose depth lies in each
/// band before scoring. Frames with no truth pixels in a band do not
/// count toward that band. Throws std::invalid_argument when the series
/// lengths disagree.
PrecisionReport precision_curve(const std::vector<Mask>& temporal_masks,
                                const std::vector<Mask>& baseline_masks,
                                const std::vector<Mask>& truth_masks,
                                const std::vector<DepthFrame>& depths,
                                const std::vector<DistanceBand>& bands,
                                const std::vector<double>& thresholds);

std::string format_precision_table(const PrecisionReport& report);

}  // namespace walksense
