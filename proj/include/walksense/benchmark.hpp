#pragma once

#include <string>
#include <vector>

#include "walksense/config.hpp"
#include "walksense/dataset.hpp"
#include "walksense/detector.hpp"

namespace walksense {

struct StageStats {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  int samples = 0;
};

StageStats summarize_ms(std::vector<double> samples_ms);

struct BenchReport {
  StageStats acquisition;
  StageStats ground;
  StageStats direction;
  StageStats detection;  // trigger frames only
  StageStats total_nav;  // per-frame total excluding 2.5-D detection
  int frames = 0;
  int repetitions = 0;
};

/// Replays the dataset `repetitions` times through the pipeline and
/// collects per-stage wall times. The 2.5-D detection stage is sampled
/// only on the configured trigger frames.
BenchReport run_benchmark(const Dataset& ds, const EngineConfig& cfg, int repetitions,
                          const DetectionSource& source);

/// Fixed-width table in the layout of the reference smartphone
/// implementation, its per-stage averages printed alongside for context.
std::string format_benchmark_table(const BenchReport& report);

}  // namespace walksense
