#include "walksense/ground.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "walksense/rng.hpp"

namespace walksense {

void validate(const GroundConfig& cfg) {
  if (cfg.lambda < 0.0 || cfg.mu < 0.0) {
    throw std::invalid_argument("ground config: lambda and mu must be non-negative");
  }
  if (std::abs(cfg.lambda + cfg.mu - 1.0) > 1e-9) {
    throw std::invalid_argument("ground config: lambda + mu must equal 1");
  }
  if (!(cfg.tz > 0.0)) throw std::invalid_argument("ground config: tz must be positive");
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("ground config: sigma must be positive");
  if (!(cfg.slope_min_deg > 0.0) || !(cfg.slope_min_deg < cfg.slope_max_deg) ||
      !(cfg.slope_max_deg < 90.0)) {
    throw std::invalid_argument("ground config: slope band must satisfy 0 < slope_min < slope_max < 90");
  }
  if (cfg.ransac_iters < 1) throw std::invalid_argument("ground config: ransac_iters must be >= 1");
  if (!(cfg.ransac_inlier_tol > 0.0)) {
    throw std::invalid_argument("ground config: ransac_inlier_tol must be positive");
  }
  if (cfg.otsu_bins < 16) throw std::invalid_argument("ground config: otsu_bins must be >= 16");
  if (cfg.min_ground_points < 3) {
    throw std::invalid_argument("ground config: min_ground_points must be >= 3");
  }
  if (cfg.height_margin < 0.0) {
    throw std::invalid_argument("ground config: height_margin must be non-negative");
  }
}

double signed_distance(const GroundPlane& plane, const Point3& p) {
  return plane.a * p.x + plane.b * p.y + plane.c * p.z + plane.d;
}

const char* to_string(GroundClass cls) {
  switch (cls) {
    case GroundClass::horizontal: return "horizontal";
    case GroundClass::upslope: return "upslope";
    case GroundClass::downslope: return "downslope";
    case GroundClass::non_ground: return "non_ground";
  }
  return "?";
}

namespace {

// Exact comparison of a/b vs c/d (non-negative numerators, positive
// denominators) by continued-fraction descent; avoids the overflow a
// cross multiplication would hit on large histograms.
int compare_fractions(unsigned __int128 a, unsigned __int128 b, unsigned __int128 c,
                      unsigned __int128 d) {
  int sign = 1;
  for (;;) {
    const unsigned __int128 q1 = a / b;
    const unsigned __int128 q2 = c / d;
    if (q1 != q2) return sign * (q1 < q2 ? -1 : 1);
    const unsigned __int128 r1 = a % b;
    const unsigned __int128 r2 = c % d;
    if (r1 == 0 && r2 == 0) return 0;
    if (r1 == 0) return -sign;
    if (r2 == 0) return sign;
    // fractional parts r1/b vs r2/d order as b/r1 vs d/r2, inverted
    a = b;
    b = r1;
    c = d;
    d = r2;
    sign = -sign;
  }
}

}  // namespace

int otsu_split_index(const std::vector<std::int64_t>& counts) {
  const int bins = static_cast<int>(counts.size());
  if (bins < 2) throw std::invalid_argument("otsu: histogram needs at least 2 bins");

  std::int64_t total = 0;
  std::int64_t moment_total = 0;
  for (int i = 0; i < bins; ++i) {
    if (counts[i] < 0) throw std::invalid_argument("otsu: negative bin count");
    total += counts[i];
    moment_total += counts[i] * i;
  }
  if (total == 0) throw std::invalid_argument("otsu: empty histogram");

  // Between-class variance at split k is (s0*w1 - s1*w0)^2 / (w0*w1) with
  // class weights w and index moments s; maximize exactly over k.
  std::int64_t w0 = 0;
  std::int64_t s0 = 0;
  int best_k = 1;
  unsigned __int128 best_num = 0;
  unsigned __int128 best_den = 1;
  bool have_best = false;

  for (int k = 1; k < bins; ++k) {
    w0 += counts[k - 1];
    s0 += counts[k - 1] * (k - 1);
    const std::int64_t w1 = total - w0;
    const std::int64_t s1 = moment_total - s0;

    unsigned __int128 num = 0;
    unsigned __int128 den = 1;
    if (w0 > 0 && w1 > 0) {
      const __int128 diff = static_cast<__int128>(s0) * w1 - static_cast<__int128>(s1) * w0;
      const unsigned __int128 mag = diff < 0 ? static_cast<unsigned __int128>(-diff)
                                             : static_cast<unsigned __int128>(diff);
      num = mag * mag;
      den = static_cast<unsigned __int128>(w0) * static_cast<unsigned __int128>(w1);
    }

    if (!have_best) {
      have_best = true;
      best_k = k;
      best_num = num;
      best_den = den;
      continue;
    }
    // strict improvement only, so ties keep the lowest split
    bool better;
    if (num == 0) {
      better = false;
    } else if (best_num == 0) {
      better = true;
    } else {
      better = compare_fractions(num, den, best_num, best_den) > 0;
    }
    if (better) {
      best_k = k;
      best_num = num;
      best_den = den;
    }
  }
  return best_k;
}

double otsu_height_threshold(const PointCloud& cloud, const GroundConfig& cfg) {
  std::vector<double> ys;
  ys.reserve(cloud.size());
  for (const Point3& p : cloud) {
    if (p.z > 0.0 && p.z < cfg.tz) ys.push_back(p.y);
  }
  if (static_cast<int>(ys.size()) < cfg.min_ground_points) {
    throw std::invalid_argument("otsu: fewer than min_ground_points points within range");
  }
  const auto [mn_it, mx_it] = std::minmax_element(ys.begin(), ys.end());
  const double y_min = *mn_it;
  const double y_max = *mx_it;
  if (!(y_max - y_min > 1e-12)) {
    throw std::invalid_argument("otsu: degenerate histogram, all heights equal");
  }

  const int bins = cfg.otsu_bins;
  const double width = (y_max - y_min) / bins;
  std::vector<std::int64_t> counts(bins, 0);
  for (double y : ys) {
    int b = static_cast<int>((y - y_min) / width);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    ++counts[b];
  }
  const int k = otsu_split_index(counts);
  return y_min + k * width;
}

double blend_threshold(double ty_roi, const GroundState& state, const GroundConfig& cfg) {
  if (!state.initialized) return ty_roi;
  return cfg.lambda * ty_roi + cfg.mu * state.ty_pre;
}

PointCloud select_candidates(const PointCloud& cloud, double ty, const GroundConfig& cfg) {
  PointCloud out;
  out.reserve(cloud.size() / 2);
  for (const Point3& p : cloud) {
    if (p.y < ty && p.z > 0.0 && p.z < cfg.tz) out.push_back(p);
  }
  return out;
}

namespace {

GroundPlane normalized_plane(double a, double b, double c, double d) {
  const double n = std::sqrt(a * a + b * b + c * c);
  if (!(n > 0.0)) throw std::runtime_error("plane fit produced a zero normal");
  double s = 1.0 / n;
  if (b < 0.0) s = -s;
  return GroundPlane{a * s, b * s, c * s, d * s};
}

GroundPlane least_squares_plane(const PointCloud& pts, const std::vector<int>& idx) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (int i : idx) centroid += Eigen::Vector3d(pts[i].x, pts[i].y, pts[i].z);
  centroid /= static_cast<double>(idx.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (int i : idx) {
    const Eigen::Vector3d q = Eigen::Vector3d(pts[i].x, pts[i].y, pts[i].z) - centroid;
    scatter += q * q.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(scatter);
  const Eigen::Vector3d n = es.eigenvectors().col(0);  // smallest eigenvalue
  return normalized_plane(n.x(), n.y(), n.z(), -n.dot(centroid));
}

}  // namespace

GroundPlane fit_plane_ransac(const PointCloud& f_init, const GroundConfig& cfg,
                             std::uint64_t seed) {
  const int n = static_cast<int>(f_init.size());
  if (n < cfg.min_ground_points) {
    throw std::invalid_argument("ransac: fewer than min_ground_points candidate points");
  }

  Rng rng(seed);
  int best_count = -1;
  GroundPlane best{};
  for (int it = 0; it < cfg.ransac_iters; ++it) {
    const int i0 = static_cast<int>(rng.bounded(n));
    int i1 = static_cast<int>(rng.bounded(n));
    while (i1 == i0) i1 = static_cast<int>(rng.bounded(n));
    int i2 = static_cast<int>(rng.bounded(n));
    while (i2 == i0 || i2 == i1) i2 = static_cast<int>(rng.bounded(n));

    const Eigen::Vector3d p0(f_init[i0].x, f_init[i0].y, f_init[i0].z);
    const Eigen::Vector3d p1(f_init[i1].x, f_init[i1].y, f_init[i1].z);
    const Eigen::Vector3d p2(f_init[i2].x, f_init[i2].y, f_init[i2].z);
    const Eigen::Vector3d normal = (p1 - p0).cross(p2 - p0);
    if (normal.norm() < 1e-12) continue;  // collinear sample

    GroundPlane hyp;
    try {
      hyp = normalized_plane(normal.x(), normal.y(), normal.z(), -normal.dot(p0));
    } catch (const std::runtime_error&) {
      continue;
    }
    int count = 0;
    for (const Point3& p : f_init) {
      if (std::abs(signed_distance(hyp, p)) <= cfg.ransac_inlier_tol) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best = hyp;
    }
  }
  if (best_count < 0) {
    throw std::runtime_error("ransac: all sampled hypotheses degenerate");
  }

  std::vector<int> inliers;
  inliers.reserve(best_count);
  for (int i = 0; i < n; ++i) {
    if (std::abs(signed_distance(best, f_init[i])) <= cfg.ransac_inlier_tol) {
      inliers.push_back(i);
    }
  }
  if (inliers.size() < 3) return best;
  return least_squares_plane(f_init, inliers);
}

double ground_pitch_angle(const GroundPlane& plane) {
  const double b = std::clamp(std::abs(plane.b), 0.0, 1.0);
  return std::acos(b) * 180.0 / M_PI;
}

GroundClass classify_ground(const GroundPlane& plane, const GroundConfig& cfg) {
  const double phi = ground_pitch_angle(plane);
  if (phi < cfg.slope_min_deg) return GroundClass::horizontal;
  if (phi > cfg.slope_max_deg) return GroundClass::non_ground;
  // within band: ground rises along +Z when the grade -c/b is positive
  return (-plane.c / plane.b > 0.0) ? GroundClass::upslope : GroundClass::downslope;
}

PointCloud refine_ground(const PointCloud& f_init, const GroundPlane& plane,
                         const GroundConfig& cfg) {
  PointCloud out;
  out.reserve(f_init.size());
  for (const Point3& p : f_init) {
    if (std::abs(signed_distance(plane, p)) <= cfg.sigma) out.push_back(p);
  }
  return out;
}

double ground_height(const PointCloud& f) {
  if (f.empty()) throw std::invalid_argument("ground_height: empty cloud");
  double sum = 0.0;
  for (const Point3& p : f) sum += p.y;
  return sum / static_cast<double>(f.size());
}

GroundResult detect_ground(const PointCloud& cloud, GroundState& state,
                           const GroundConfig& cfg, std::uint64_t seed) {
  GroundResult result;
  try {
    const double ty_roi = otsu_height_threshold(cloud, cfg);
    const double ty = blend_threshold(ty_roi, state, cfg);
    result.ty_used = ty;

    const PointCloud f_init = select_candidates(cloud, ty, cfg);
    if (static_cast<int>(f_init.size()) < cfg.min_ground_points) {
      result.reason = "too few candidate points below threshold";
      return result;
    }

    const GroundPlane plane = fit_plane_ransac(f_init, cfg, seed);
    const GroundClass cls = classify_ground(plane, cfg);
    if (cls == GroundClass::non_ground) {
      result.reason = "plane pitch outside slope band";
      return result;
    }

    const PointCloud refined = refine_ground(f_init, plane, cfg);
    if (refined.empty()) {
      result.reason = "refinement produced an empty ground set";
      return result;
    }

    result.cls = cls;
    result.plane = plane;
    result.refined = std::move(refined);
    result.height_h = ground_height(result.refined);

    state.ty_pre = result.height_h + cfg.height_margin;
    state.initialized = true;
  } catch (const std::exception& e) {
    result = GroundResult{};
    result.reason = e.what();
  }
  return result;
}

}  // namespace walksense
