#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "walksense/benchmark.hpp"
#include "walksense/config.hpp"
#include "walksense/metrics.hpp"
#include "walksense/pipeline.hpp"
#include "walksense/synth.hpp"

namespace {

using namespace walksense;

EngineConfig load_config_or_default(const std::string& path) {
  if (path.empty()) {
    EngineConfig cfg;
    validate(cfg);
    return cfg;
  }
  return load_config(path);
}

DetectionSource make_source(const Dataset& ds, const std::string& detections_path,
                            const std::string& remote, const EngineConfig& cfg) {
  DetectionSource source;
  if (!remote.empty()) {
    source.kind = DetectionSource::Kind::remote;
    source.target = remote;
    source.timeout_ms = cfg.detector_timeout_ms;
    source.retries = cfg.detector_retries;
  } else {
    source.kind = DetectionSource::Kind::replay;
    source.target = detections_path.empty() ? ds.detections_path().string() : detections_path;
  }
  return source;
}

std::vector<DistanceBand> parse_bands(const std::string& text) {
  std::vector<DistanceBand> bands;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw CLI::ValidationError("--bands", "expected lo-hi pairs like 0-1,1-2");
    }
    bands.push_back({std::stod(item.substr(0, dash)), std::stod(item.substr(dash + 1))});
  }
  return bands;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir, std::uint64_t seed,
              bool no_detections) {
  const SceneSpec spec = load_scene_spec(spec_path);
  generate_synthetic_scene(spec, seed, out_dir, !no_detections);
  std::cout << "wrote " << spec.frame_count << " frame(s) to " << out_dir << "\n";
  return 0;
}

int cmd_run(const std::string& dataset_dir, const std::string& config_path,
            const std::string& out_path, const std::string& detections_path,
            const std::string& remote, const std::string& trigger_list) {
  EngineConfig cfg = load_config_or_default(config_path);
  if (!trigger_list.empty()) {
    cfg.trigger_frames.clear();
    std::stringstream ss(trigger_list);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.trigger_frames.push_back(std::stoll(item));
  }

  const Dataset ds = open_dataset(dataset_dir);
  const DetectionSource source = make_source(ds, detections_path, remote, cfg);
  const PipelineResult result = run_pipeline(ds, cfg, source);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  write_event_stream(out, result);

  std::size_t events = 0;
  for (const FrameOutput& f : result.frames) events += f.events.size();
  std::cout << "processed " << result.frames.size() << " frame(s), wrote " << events
            << " event(s) to " << out_path << "\n";
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_bench(const std::string& dataset_dir, const std::string& config_path, int reps,
              const std::string& detections_path, const std::string& remote) {
  const EngineConfig cfg = load_config_or_default(config_path);
  const Dataset ds = open_dataset(dataset_dir);
  const DetectionSource source = make_source(ds, detections_path, remote, cfg);
  const BenchReport report = run_benchmark(ds, cfg, reps, source);
  std::cout << format_benchmark_table(report);
  return 0;
}

int cmd_eval_ground(const std::string& dataset_dir, const std::string& config_path,
                    const std::string& bands_text, const std::string& thresholds_text,
                    const std::string& report_path) {
  const EngineConfig cfg = load_config_or_default(config_path);
  const Dataset ds = open_dataset(dataset_dir);

  std::vector<DistanceBand> bands = parse_bands(bands_text);
  std::vector<double> thresholds;
  {
    std::stringstream ss(thresholds_text);
    std::string item;
    while (std::getline(ss, item, ',')) thresholds.push_back(std::stod(item));
  }

  std::vector<Mask> truths;
  std::vector<DepthFrame> depths;
  for (const std::int64_t frame : ds.frame_indices) {
    if (!ds.has_truth(frame)) {
      throw std::runtime_error("missing truth mask for frame " + std::to_string(frame));
    }
    truths.push_back(ds.load_truth_mask(frame));
    depths.push_back(ds.load_depth(frame));
  }

  const GroundMaskSeries temporal = compute_ground_masks(ds, cfg.ground, true, cfg.seed);
  const GroundMaskSeries baseline = compute_ground_masks(ds, cfg.ground, false, cfg.seed);
  const PrecisionReport report =
      precision_curve(temporal.masks, baseline.masks, truths, depths, bands, thresholds);

  double mean_temporal = 0.0;
  double mean_baseline = 0.0;
  std::ostringstream per_frame;
  for (std::size_t f = 0; f < truths.size(); ++f) {
    const double iou_t = ground_iou(temporal.masks[f], truths[f]);
    const double iou_b = ground_iou(baseline.masks[f], truths[f]);
    mean_temporal += iou_t;
    mean_baseline += iou_b;
    char line[96];
    std::snprintf(line, sizeof(line), "frame %06lld  overlap %.4f / %.4f\n",
                  static_cast<long long>(ds.frame_indices[f]), iou_t, iou_b);
    per_frame << line;
  }
  mean_temporal /= static_cast<double>(truths.size());
  mean_baseline /= static_cast<double>(truths.size());

  std::cout << format_precision_table(report);
  char summary[96];
  std::snprintf(summary, sizeof(summary),
                "mean per-frame overlap: %.4f temporal / %.4f baseline (max 0.5)\n",
                mean_temporal, mean_baseline);
  std::cout << summary;

  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << format_precision_table(report) << summary << "\n" << per_frame.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walksense: RGB-D + IMU walkable-direction and 2.5-D obstacle engine"};
  app.require_subcommand(1);

  std::string dataset_dir, config_path, out_path, detections_path, remote, trigger_list;
  std::string spec_path, bands_text = "0-1,1-2,2-3", thresholds_text = "0.2,0.3,0.4";
  std::string report_path;
  std::uint64_t seed = 1;
  int reps = 3;
  bool no_detections = false;

  CLI::App* synth = app.add_subcommand("synth", "render a synthetic dataset from a scene spec");
  synth->add_option("--spec", spec_path, "scene spec JSON")->required();
  synth->add_option("--out", out_path, "output dataset directory")->required();
  synth->add_option("--seed", seed, "noise seed");
  synth->add_flag("--no-detections", no_detections, "skip detections.ndrec");

  CLI::App* run = app.add_subcommand("run", "process a dataset into an event stream");
  run->add_option("--dataset", dataset_dir, "dataset directory")->required();
  run->add_option("--config", config_path, "engine config file");
  run->add_option("--out", out_path, "event stream output (ndjson)")->required();
  run->add_option("--detections", detections_path, "replay detections file");
  run->add_option("--remote", remote, "remote detector endpoint, e.g. http://host:8080");
  run->add_option("--trigger", trigger_list, "comma-separated 2.5-D trigger frames");

  CLI::App* bench = app.add_subcommand("bench", "per-stage latency benchmark");
  bench->add_option("--dataset", dataset_dir, "dataset directory")->required();
  bench->add_option("--config", config_path, "engine config file");
  bench->add_option("--reps", reps, "dataset repetitions");
  bench->add_option("--detections", detections_path, "replay detections file");
  bench->add_option("--remote", remote, "remote detector endpoint");

  CLI::App* eval = app.add_subcommand("eval-ground", "precision vs distance against truth masks");
  eval->add_option("--dataset", dataset_dir, "dataset directory with truth masks")->required();
  eval->add_option("--config", config_path, "engine config file");
  eval->add_option("--bands", bands_text, "distance bands, e.g. 0-1,1-2,2-3");
  eval->add_option("--thresholds", thresholds_text, "overlap thresholds, e.g. 0.2,0.3,0.4");
  eval->add_option("--report", report_path, "also write the table to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(spec_path, out_path, seed, no_detections);
    if (run->parsed()) {
      return cmd_run(dataset_dir, config_path, out_path, detections_path, remote, trigger_list);
    }
    if (bench->parsed()) return cmd_bench(dataset_dir, config_path, reps, detections_path, remote);
    if (eval->parsed()) {
      return cmd_eval_ground(dataset_dir, config_path, bands_text, thresholds_text, report_path);
    }
  } catch (const walksense::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
