#pragma once

#include <vector>

#include "walksense/geometry.hpp"
#include "walksense/ground.hpp"

namespace walksense {

struct DirectionConfig {
  double theta_deg = 0.5;        // sector angular width
  int n_sectors = 116;           // 58 degree horizontal fan at 0.5 deg/sector
  double w_sw = 0.7;             // passable corridor width, meters
  double epsilon = 0.2;          // overhead clearance above the head band, meters
  double alpha = 1.0;            // angle-award weight, per degree
  double beta = 30.0;            // distance-award weight, per meter
  double tau = 0.8;              // blocked-distance threshold, meters
  double straight_band_deg = 5.0;
  bool centered_window = false;  // widen the distance window symmetrically about i
};

/// Throws std::invalid_argument naming the offending field.
void validate(const DirectionConfig& cfg);

/// Per-sector nearest forward distance over the X/Z ground projection.
/// nearest[i] is in (0, tz]; empty sectors hold the sentinel tz.
struct SectorScan {
  std::vector<double> nearest;
  double tz = 0.0;
  DirectionConfig config;
};

enum class WalkAction { blocked, straight, turn };

struct DirectionDecision {
  WalkAction action = WalkAction::blocked;
  double turn_angle_deg = 0.0;  // theta * (i_max - N/2); exceeds the straight band iff turn
  int chosen_sector = -1;
  double chosen_award = 0.0;
};

const char* to_string(WalkAction action);

/// Obstacle-relevant volume above the detected ground: x and z within the
/// refined ground extents, y from H up to the camera height plus epsilon.
/// Throws std::invalid_argument when ground is non_ground or empty.
PointCloud select_walkable_points(const PointCloud& cloud, const GroundResult& ground,
                                  const DirectionConfig& cfg);

/// Bins points by azimuth (atan2 of x over z, sector index
/// floor(az/theta) + N/2) and keeps the minimum z per sector. Points
/// outside the fan are discarded; stored distances are capped at tz.
SectorScan sector_nearest(const PointCloud& points, const DirectionConfig& cfg, double tz);

/// Award per sector: alpha * (90 - theta*|i - N/2|) plus beta times the
/// windowed minimum distance, the window spanning the sectors a corridor
/// of width w_sw occupies at the sector's own nearest distance.
std::vector<double> sector_awards(const SectorScan& scan, const DirectionConfig& cfg);

/// Argmax of the awards (ties prefer the sector closest to center, then
/// the smaller index). Blocked when the winning sector's distance is
/// under tau; straight when the turn angle is within the straight band.
DirectionDecision optimal_direction(const SectorScan& scan, const std::vector<double>& awards,
                                    const DirectionConfig& cfg);

}  // namespace walksense
