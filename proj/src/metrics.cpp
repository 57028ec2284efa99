#include "walksense/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace walksense {

double ground_iou(const Mask& detected, const Mask& truth) {
  if (detected.width != truth.width || detected.height != truth.height) {
    throw std::invalid_argument("ground_iou: mask dimension mismatch");
  }
  std::int64_t n_detected = 0;
  std::int64_t n_truth = 0;
  std::int64_t n_overlap = 0;
  for (std::size_t i = 0; i < detected.data.size(); ++i) {
    const bool d = detected.data[i] != 0;
    const bool t = truth.data[i] != 0;
    n_detected += d;
    n_truth += t;
    n_overlap += d && t;
  }
  const std::int64_t denom = n_detected + n_truth;
  if (denom == 0) return 0.0;
  return static_cast<double>(n_overlap) / static_cast<double>(denom);
}

namespace {

Mask restrict_to_band(const Mask& mask, const DepthFrame& depth, const DistanceBand& band) {
  Mask out(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    if (!mask.data[i]) continue;
    const double z = depth.values[i];
    if (z >= band.lo && z < band.hi) out.data[i] = 1;
  }
  return out;
}

}  // namespace

PrecisionReport precision_curve(const std::vector<Mask>& temporal_masks,
                                const std::vector<Mask>& baseline_masks,
                                const std::vector<Mask>& truth_masks,
                                const std::vector<DepthFrame>& depths,
                                const std::vector<DistanceBand>& bands,
                                const std::vector<double>& thresholds) {
  const std::size_t n = truth_masks.size();
  if (temporal_masks.size() != n || baseline_masks.size() != n || depths.size() != n) {
    throw std::invalid_argument("precision_curve: series lengths disagree");
  }

  PrecisionReport report;
  report.bands = bands;
  report.thresholds = thresholds;
  report.temporal.assign(bands.size(), std::vector<PrecisionCell>(thresholds.size()));
  report.baseline.assign(bands.size(), std::vector<PrecisionCell>(thresholds.size()));

  for (std::size_t b = 0; b < bands.size(); ++b) {
    std::vector<int> temporal_hits(thresholds.size(), 0);
    std::vector<int> baseline_hits(thresholds.size(), 0);
    int eligible = 0;

    for (std::size_t f = 0; f < n; ++f) {
      const Mask truth_band = restrict_to_band(truth_masks[f], depths[f], bands[b]);
      if (truth_band.count() == 0) continue;
      ++eligible;
      const double iou_t =
          ground_iou(restrict_to_band(temporal_masks[f], depths[f], bands[b]), truth_band);
      const double iou_b =
          ground_iou(restrict_to_band(baseline_masks[f], depths[f], bands[b]), truth_band);
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        temporal_hits[t] += iou_t >= thresholds[t];
        baseline_hits[t] += iou_b >= thresholds[t];
      }
    }

    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      report.temporal[b][t].eligible_frames = eligible;
      report.baseline[b][t].eligible_frames = eligible;
      if (eligible > 0) {
        report.temporal[b][t].precision = static_cast<double>(temporal_hits[t]) / eligible;
        report.baseline[b][t].precision = static_cast<double>(baseline_hits[t]) / eligible;
      }
    }
  }
  return report;
}

std::string format_precision_table(const PrecisionReport& report) {
  std::ostringstream out;
  out << "Ground precision by distance band (temporal / memoryless baseline)\n";
  char buf[128];
  for (std::size_t b = 0; b < report.bands.size(); ++b) {
    std::snprintf(buf, sizeof(buf), "  %.1f-%.1f m  (%d frames)\n", report.bands[b].lo,
                  report.bands[b].hi, report.temporal[b].empty()
                                          ? 0
                                          : report.temporal[b][0].eligible_frames);
    out << buf;
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      std::snprintf(buf, sizeof(buf), "    overlap >= %.2f:  %.3f / %.3f\n",
                    report.thresholds[t], report.temporal[b][t].precision,
                    report.baseline[b][t].precision);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace walksense
