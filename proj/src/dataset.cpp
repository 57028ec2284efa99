#include "walksense/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "walksense/detector.hpp"

namespace walksense {

namespace fs = std::filesystem;

std::string frame_stem(std::int64_t frame) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(frame));
  return buf;
}

namespace {

std::map<std::string, std::string> read_kv_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 const fs::path& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error(path.string() + ": missing key '" + key + "'");
  return std::stod(it->second);
}

}  // namespace

DepthFrame Dataset::load_depth(std::int64_t frame) const {
  const GrayImage16 raw = read_png_gray16(root / "frames" / (frame_stem(frame) + ".depth.png"));
  DepthFrame depth;
  depth.width = raw.width;
  depth.height = raw.height;
  depth.frame_index = frame;
  depth.values.resize(raw.values.size());
  const float scale = static_cast<float>(intrinsics.depth_scale);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    depth.values[i] = static_cast<float>(raw.values[i]) * scale;
  }
  return depth;
}

RgbFrame Dataset::load_rgb(std::int64_t frame) const {
  RgbFrame rgb = read_png_rgb8(root / "frames" / (frame_stem(frame) + ".rgb.png"));
  rgb.frame_index = frame;
  return rgb;
}

DatasetFrameMeta Dataset::load_meta(std::int64_t frame) const {
  const fs::path path = root / "frames" / (frame_stem(frame) + ".meta");
  const auto kv = read_kv_file(path);
  DatasetFrameMeta meta;
  meta.timestamp_us = static_cast<std::int64_t>(kv_double(kv, "timestamp_us", path));
  meta.pitch_deg = kv_double(kv, "pitch_deg", path);
  meta.roll_deg = kv_double(kv, "roll_deg", path);
  return meta;
}

Attitude Dataset::load_attitude(std::int64_t frame) const {
  const DatasetFrameMeta meta = load_meta(frame);
  return Attitude{meta.pitch_deg * M_PI / 180.0, meta.roll_deg * M_PI / 180.0};
}

bool Dataset::has_truth(std::int64_t frame) const {
  return fs::exists(root / "truth" / (frame_stem(frame) + ".mask.png"));
}

Mask Dataset::load_truth_mask(std::int64_t frame) const {
  return read_png_mask(root / "truth" / (frame_stem(frame) + ".mask.png"));
}

Dataset open_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw std::runtime_error("dataset directory not found: " + root.string());
  }
  Dataset ds;
  ds.root = root;

  const fs::path intr_path = root / "intrinsics.txt";
  const auto intr = read_kv_file(intr_path);
  ds.intrinsics.fx = kv_double(intr, "fx", intr_path);
  ds.intrinsics.fy = kv_double(intr, "fy", intr_path);
  ds.intrinsics.u0 = kv_double(intr, "u0", intr_path);
  ds.intrinsics.v0 = kv_double(intr, "v0", intr_path);
  ds.intrinsics.depth_scale = kv_double(intr, "depth_scale", intr_path);

  const fs::path ext_path = root / "extrinsics.txt";
  if (fs::exists(ext_path)) {
    const auto ext = read_kv_file(ext_path);
    const auto parse_row = [&](const std::string& key, int want) {
      const auto it = ext.find(key);
      if (it == ext.end()) {
        throw std::runtime_error(ext_path.string() + ": missing key '" + key + "'");
      }
      std::istringstream ss(it->second);
      std::vector<double> vals;
      double v = 0.0;
      while (ss >> v) vals.push_back(v);
      if (static_cast<int>(vals.size()) != want) {
        throw std::runtime_error(ext_path.string() + ": key '" + key + "' needs " +
                                 std::to_string(want) + " numbers");
      }
      return vals;
    };
    const auto r = parse_row("R", 9);
    const auto t = parse_row("t", 3);
    ds.extrinsics.r << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
    ds.extrinsics.t << t[0], t[1], t[2];
  }

  const fs::path frames_dir = root / "frames";
  if (!fs::is_directory(frames_dir)) {
    throw std::runtime_error("dataset has no frames/ directory: " + root.string());
  }
  for (const auto& entry : fs::directory_iterator(frames_dir)) {
    const std::string name = entry.path().filename().string();
    const auto pos = name.find(".depth.png");
    if (pos == std::string::npos || pos == 0) continue;
    ds.frame_indices.push_back(std::stoll(name.substr(0, pos)));
  }
  std::sort(ds.frame_indices.begin(), ds.frame_indices.end());
  if (ds.frame_indices.empty()) {
    throw std::runtime_error("dataset holds no depth frames: " + root.string());
  }
  return ds;
}

DatasetWriter::DatasetWriter(const fs::path& root, const CameraIntrinsics& k,
                             const Extrinsics& ext)
    : root_(root) {
  fs::create_directories(root_ / "frames");
  fs::create_directories(root_ / "truth");

  std::ofstream intr(root_ / "intrinsics.txt");
  intr << "fx = " << k.fx << "\n";
  intr << "fy = " << k.fy << "\n";
  intr << "u0 = " << k.u0 << "\n";
  intr << "v0 = " << k.v0 << "\n";
  intr << "depth_scale = " << k.depth_scale << "\n";

  std::ofstream extf(root_ / "extrinsics.txt");
  extf << "R =";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) extf << " " << ext.r(i, j);
  }
  extf << "\nt = " << ext.t.x() << " " << ext.t.y() << " " << ext.t.z() << "\n";
}

void DatasetWriter::add_frame(std::int64_t frame, const GrayImage16& depth_mm,
                              const RgbFrame& rgb, const DatasetFrameMeta& meta,
                              const Mask* truth_mask) {
  const std::string stem = frame_stem(frame);
  write_png_gray16(root_ / "frames" / (stem + ".depth.png"), depth_mm);
  write_png_rgb8(root_ / "frames" / (stem + ".rgb.png"), rgb);

  std::ofstream metaf(root_ / "frames" / (stem + ".meta"));
  metaf << "timestamp_us = " << meta.timestamp_us << "\n";
  metaf << "pitch_deg = " << meta.pitch_deg << "\n";
  metaf << "roll_deg = " << meta.roll_deg << "\n";

  if (truth_mask) write_png_mask(root_ / "truth" / (stem + ".mask.png"), *truth_mask);
}

void DatasetWriter::write_detections(const std::vector<Detection2D>& detections) {
  std::ofstream out(root_ / "detections.ndrec");
  for (const Detection2D& det : detections) out << to_ndrec_line(det) << "\n";
}

}  // namespace walksense
