#include "walksense/direction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace walksense {

void validate(const DirectionConfig& cfg) {
  if (!(cfg.theta_deg > 0.0)) {
    throw std::invalid_argument("direction config: theta_deg must be positive");
  }
  if (cfg.n_sectors < 2 || cfg.n_sectors % 2 != 0) {
    throw std::invalid_argument("direction config: n_sectors must be even and >= 2");
  }
  if (!(cfg.w_sw > 0.0)) throw std::invalid_argument("direction config: w_sw must be positive");
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("direction config: tau must be positive");
  if (cfg.alpha < 0.0 || cfg.beta < 0.0 || (cfg.alpha == 0.0 && cfg.beta == 0.0)) {
    throw std::invalid_argument(
        "direction config: alpha and beta must be non-negative and not both zero");
  }
  if (cfg.epsilon < 0.0) {
    throw std::invalid_argument("direction config: epsilon must be non-negative");
  }
  if (cfg.straight_band_deg < 0.0) {
    throw std::invalid_argument("direction config: straight_band_deg must be non-negative");
  }
}

const char* to_string(WalkAction action) {
  switch (action) {
    case WalkAction::blocked: return "blocked";
    case WalkAction::straight: return "straight";
    case WalkAction::turn: return "turn";
  }
  return "?";
}

PointCloud select_walkable_points(const PointCloud& cloud, const GroundResult& ground,
                                  const DirectionConfig& cfg) {
  if (ground.cls == GroundClass::non_ground || ground.refined.empty() || !ground.plane) {
    throw std::invalid_argument("select_walkable_points: no ground available");
  }

  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_z = -std::numeric_limits<double>::infinity();
  for (const Point3& p : ground.refined) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    max_z = std::max(max_z, p.z);
  }
  // |d| of the unit-normal plane is the camera height above it
  const double y_lo = ground.height_h;
  const double y_hi = ground.height_h + std::abs(ground.plane->d) + cfg.epsilon;

  PointCloud out;
  out.reserve(cloud.size() / 4);
  for (const Point3& p : cloud) {
    if (p.x < min_x || p.x > max_x) continue;
    if (p.y < y_lo || p.y > y_hi) continue;
    if (p.z < 0.0 || p.z > max_z) continue;
    out.push_back(p);
  }
  return out;
}

SectorScan sector_nearest(const PointCloud& points, const DirectionConfig& cfg, double tz) {
  SectorScan scan;
  scan.tz = tz;
  scan.config = cfg;
  scan.nearest.assign(cfg.n_sectors, tz);

  const int half = cfg.n_sectors / 2;
  for (const Point3& p : points) {
    if (p.z <= 0.0) continue;
    const double az_deg = std::atan2(p.x, p.z) * 180.0 / M_PI;
    const int i = static_cast<int>(std::floor(az_deg / cfg.theta_deg)) + half;
    if (i < 0 || i >= cfg.n_sectors) continue;
    scan.nearest[i] = std::min(scan.nearest[i], std::min(p.z, tz));
  }
  return scan;
}

std::vector<double> sector_awards(const SectorScan& scan, const DirectionConfig& cfg) {
  const int n_sectors = static_cast<int>(scan.nearest.size());
  const int half = n_sectors / 2;
  std::vector<double> awards(n_sectors);

  for (int i = 0; i < n_sectors; ++i) {
    const double zi = scan.nearest[i];
    const double ratio = std::min(cfg.w_sw / zi, 1.0);
    const int span = static_cast<int>(
        std::floor(std::asin(ratio) * (180.0 / M_PI) / cfg.theta_deg));

    int lo = i;
    int hi = std::min(i + span, n_sectors - 1);
    if (cfg.centered_window) {
      lo = std::max(i - span / 2, 0);
      hi = std::min(i + span / 2, n_sectors - 1);
    }
    double min_z = scan.nearest[lo];
    for (int j = lo + 1; j <= hi; ++j) min_z = std::min(min_z, scan.nearest[j]);

    const double angle_award = 90.0 - cfg.theta_deg * std::abs(i - half);
    awards[i] = cfg.alpha * angle_award + cfg.beta * min_z;
  }
  return awards;
}

DirectionDecision optimal_direction(const SectorScan& scan, const std::vector<double>& awards,
                                    const DirectionConfig& cfg) {
  if (awards.size() != scan.nearest.size() ||
      awards.size() != static_cast<std::size_t>(cfg.n_sectors)) {
    throw std::invalid_argument("optimal_direction: award count does not match sector count");
  }
  const int half = cfg.n_sectors / 2;

  int best = 0;
  for (int i = 1; i < cfg.n_sectors; ++i) {
    if (awards[i] > awards[best]) {
      best = i;
    } else if (awards[i] == awards[best] &&
               std::abs(i - half) < std::abs(best - half)) {
      best = i;  // equal distance keeps the earlier, smaller index
    }
  }

  DirectionDecision decision;
  decision.chosen_sector = best;
  decision.chosen_award = awards[best];
  decision.turn_angle_deg = cfg.theta_deg * (best - half);

  if (scan.nearest[best] < cfg.tau) {
    decision.action = WalkAction::blocked;
  } else if (std::abs(decision.turn_angle_deg) <= cfg.straight_band_deg) {
    decision.action = WalkAction::straight;
  } else {
    decision.action = WalkAction::turn;
  }
  return decision;
}

}  // namespace walksense
