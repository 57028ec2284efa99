#include "walksense/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace walksense {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<std::int64_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_int(key, item));
  }
  return out;
}

}  // namespace

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  EngineConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "ground.lambda") cfg.ground.lambda = parse_double(key, value);
    else if (key == "ground.mu") cfg.ground.mu = parse_double(key, value);
    else if (key == "ground.tz") cfg.ground.tz = parse_double(key, value);
    else if (key == "ground.sigma") cfg.ground.sigma = parse_double(key, value);
    else if (key == "ground.slope_min_deg") cfg.ground.slope_min_deg = parse_double(key, value);
    else if (key == "ground.slope_max_deg") cfg.ground.slope_max_deg = parse_double(key, value);
    else if (key == "ground.ransac_iters") cfg.ground.ransac_iters = static_cast<int>(parse_int(key, value));
    else if (key == "ground.ransac_inlier_tol") cfg.ground.ransac_inlier_tol = parse_double(key, value);
    else if (key == "ground.otsu_bins") cfg.ground.otsu_bins = static_cast<int>(parse_int(key, value));
    else if (key == "ground.min_ground_points") cfg.ground.min_ground_points = static_cast<int>(parse_int(key, value));
    else if (key == "ground.height_margin") cfg.ground.height_margin = parse_double(key, value);
    else if (key == "direction.theta_deg") cfg.direction.theta_deg = parse_double(key, value);
    else if (key == "direction.n_sectors") cfg.direction.n_sectors = static_cast<int>(parse_int(key, value));
    else if (key == "direction.w_sw") cfg.direction.w_sw = parse_double(key, value);
    else if (key == "direction.epsilon") cfg.direction.epsilon = parse_double(key, value);
    else if (key == "direction.alpha") cfg.direction.alpha = parse_double(key, value);
    else if (key == "direction.beta") cfg.direction.beta = parse_double(key, value);
    else if (key == "direction.tau") cfg.direction.tau = parse_double(key, value);
    else if (key == "direction.straight_band_deg") cfg.direction.straight_band_deg = parse_double(key, value);
    else if (key == "direction.centered_window") cfg.direction.centered_window = parse_bool(key, value);
    else if (key == "fusion.min_contour_area") cfg.fusion.min_contour_area = parse_double(key, value);
    else if (key == "fusion.zeta") cfg.fusion.zeta = parse_double(key, value);
    else if (key == "fusion.close_kernel") cfg.fusion.close_kernel = static_cast<int>(parse_int(key, value));
    else if (key == "fusion.direction_band_deg") cfg.fusion.direction_band_deg = parse_double(key, value);
    else if (key == "detector.timeout_ms") cfg.detector_timeout_ms = static_cast<int>(parse_int(key, value));
    else if (key == "detector.retries") cfg.detector_retries = static_cast<int>(parse_int(key, value));
    else if (key == "pipeline.trigger_frames") cfg.trigger_frames = parse_int_list(key, value);
    else if (key == "pipeline.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }

  validate(cfg);
  return cfg;
}

void validate(const EngineConfig& cfg) {
  try {
    validate(cfg.ground);
    validate(cfg.direction);
    validate(cfg.fusion);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.detector_timeout_ms <= 0) {
    throw ConfigError("config key 'detector.timeout_ms': must be positive");
  }
  if (cfg.detector_retries < 0) {
    throw ConfigError("config key 'detector.retries': must be non-negative");
  }
}

std::string render_config(const EngineConfig& cfg) {
  std::ostringstream out;
  out << "# walksense engine configuration\n";
  out << "\n# ground detection\n";
  out << "ground.lambda = " << cfg.ground.lambda << "\n";
  out << "ground.mu = " << cfg.ground.mu << "\n";
  out << "ground.tz = " << cfg.ground.tz << "\n";
  out << "ground.sigma = " << cfg.ground.sigma << "\n";
  out << "ground.slope_min_deg = " << cfg.ground.slope_min_deg << "\n";
  out << "ground.slope_max_deg = " << cfg.ground.slope_max_deg << "\n";
  out << "ground.ransac_iters = " << cfg.ground.ransac_iters << "\n";
  out << "ground.ransac_inlier_tol = " << cfg.ground.ransac_inlier_tol << "\n";
  out << "ground.otsu_bins = " << cfg.ground.otsu_bins << "\n";
  out << "ground.min_ground_points = " << cfg.ground.min_ground_points << "\n";
  out << "ground.height_margin = " << cfg.ground.height_margin << "\n";
  out << "\n# walkable direction search\n";
  out << "direction.theta_deg = " << cfg.direction.theta_deg << "\n";
  out << "direction.n_sectors = " << cfg.direction.n_sectors << "\n";
  out << "direction.w_sw = " << cfg.direction.w_sw << "\n";
  out << "direction.epsilon = " << cfg.direction.epsilon << "\n";
  out << "direction.alpha = " << cfg.direction.alpha << "\n";
  out << "direction.beta = " << cfg.direction.beta << "\n";
  out << "direction.tau = " << cfg.direction.tau << "\n";
  out << "direction.straight_band_deg = " << cfg.direction.straight_band_deg << "\n";
  out << "direction.centered_window = " << (cfg.direction.centered_window ? "true" : "false") << "\n";
  out << "\n# 2.5-D object detection\n";
  out << "fusion.min_contour_area = " << cfg.fusion.min_contour_area << "  # px^2 at 640x480\n";
  out << "fusion.zeta = " << cfg.fusion.zeta << "\n";
  out << "fusion.close_kernel = " << cfg.fusion.close_kernel << "\n";
  out << "fusion.direction_band_deg = " << cfg.fusion.direction_band_deg << "\n";
  out << "\n# remote detector\n";
  out << "detector.timeout_ms = " << cfg.detector_timeout_ms << "\n";
  out << "detector.retries = " << cfg.detector_retries << "\n";
  out << "\n# pipeline\n";
  out << "pipeline.seed = " << cfg.seed << "\n";
  if (!cfg.trigger_frames.empty()) {
    out << "pipeline.trigger_frames = ";
    for (std::size_t i = 0; i < cfg.trigger_frames.size(); ++i) {
      if (i) out << ",";
      out << cfg.trigger_frames[i];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace walksense
