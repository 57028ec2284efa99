#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walksense/geometry.hpp"

namespace walksense {

struct GroundConfig {
  double lambda = 0.6;          // weight of the current-frame threshold
  double mu = 0.4;              // weight of the previous-frame threshold
  double tz = 3.0;              // trusted depth range, meters
  double sigma = 0.03;          // unevenness tolerance, meters
  double slope_min_deg = 3.0;   // below: horizontal
  double slope_max_deg = 15.0;  // above: non-ground
  int ransac_iters = 200;
  double ransac_inlier_tol = 0.02;  // meters
  int otsu_bins = 64;
  int min_ground_points = 100;
  double height_margin = 0.15;  // added to H when carrying it to the next frame
};

/// Throws std::invalid_argument naming the offending field.
void validate(const GroundConfig& cfg);

/// Per-stream temporal state. Owned by exactly one frame sequence.
struct GroundState {
  double ty_pre = 0.0;
  bool initialized = false;
};

/// Unit-normal plane a*x + b*y + c*z + d = 0 with b >= 0.
struct GroundPlane {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 0.0;
};

double signed_distance(const GroundPlane& plane, const Point3& p);

enum class GroundClass { horizontal, upslope, downslope, non_ground };

const char* to_string(GroundClass cls);

struct GroundResult {
  GroundClass cls = GroundClass::non_ground;
  std::optional<GroundPlane> plane;
  PointCloud refined;               // F, empty iff non_ground
  double height_h = 0.0;            // mean y of refined; meaningless when non_ground
  double ty_used = 0.0;             // the blended selection threshold of this frame
  std::string reason;               // diagnostic, set when non_ground
};

/// Histogram-level core of the adaptive threshold: returns the split
/// index k in [1, bins-1] that maximizes between-class variance of the
/// count histogram (classes are bins [0,k) and [k,bins)). Comparisons are
/// exact (integer rational arithmetic), ties resolve to the smallest k.
/// Throws std::invalid_argument on an empty histogram.
int otsu_split_index(const std::vector<std::int64_t>& counts);

/// Adaptive ground-height threshold: histogram of y over the points with
/// 0 < z < cfg.tz (cfg.otsu_bins bins spanning [min y, max y]), split by
/// otsu_split_index, returned as the corresponding y bin boundary.
/// Throws std::invalid_argument when fewer than cfg.min_ground_points
/// points are in range or when all in-range y values coincide.
double otsu_height_threshold(const PointCloud& cloud, const GroundConfig& cfg);

/// lambda * ty_roi + mu * ty_pre; just ty_roi on the first frame.
double blend_threshold(double ty_roi, const GroundState& state, const GroundConfig& cfg);

/// Coarse candidate set: { p | p.y < ty, 0 < p.z < cfg.tz }.
PointCloud select_candidates(const PointCloud& cloud, double ty, const GroundConfig& cfg);

/// Best-consensus plane over cfg.ransac_iters three-point hypotheses
/// (inlier distance <= cfg.ransac_inlier_tol), least-squares refit on the
/// winning inlier set, unit normal with b >= 0. Deterministic per seed.
/// Throws std::invalid_argument on too few points, std::runtime_error
/// when every sampled hypothesis is degenerate.
GroundPlane fit_plane_ransac(const PointCloud& f_init, const GroundConfig& cfg,
                             std::uint64_t seed);

/// Angle between the plane normal and the world up axis, degrees in [0, 90].
double ground_pitch_angle(const GroundPlane& plane);

/// horizontal / upslope / downslope / non_ground by pitch angle band; the
/// up-vs-down split uses the signed grade -c/b along +Z.
GroundClass classify_ground(const GroundPlane& plane, const GroundConfig& cfg);

/// { p in f_init : |distance to plane| <= cfg.sigma }.
PointCloud refine_ground(const PointCloud& f_init, const GroundPlane& plane,
                         const GroundConfig& cfg);

/// Mean y of f. Throws std::invalid_argument on an empty cloud.
double ground_height(const PointCloud& f);

/// Full per-frame chain: adaptive threshold -> candidate selection ->
/// RANSAC -> classification -> refinement -> height. On success the state
/// carries H + cfg.height_margin into the next frame; on any failure the
/// state is left untouched and the result is non_ground with a reason.
GroundResult detect_ground(const PointCloud& cloud, GroundState& state,
                           const GroundConfig& cfg, std::uint64_t seed);

}  // namespace walksense
