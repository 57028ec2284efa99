#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "walksense/ground.hpp"
#include "walksense/rng.hpp"

using namespace walksense;

namespace {

PointCloud points_at_height(int count, double y, double z_lo, double z_hi, Rng& rng,
                            double y_noise = 0.0) {
  PointCloud cloud;
  cloud.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point3 p;
    p.x = rng.uniform(-1.5, 1.5);
    p.y = y + (y_noise > 0.0 ? rng.gaussian(0.0, y_noise) : 0.0);
    p.z = rng.uniform(z_lo, z_hi);
    cloud.push_back(p);
  }
  return cloud;
}

GroundConfig test_config() {
  GroundConfig cfg;
  cfg.min_ground_points = 20;
  return cfg;
}

}  // namespace

TEST_SUITE("ground") {

TEST_CASE("otsu: bimodal cloud splits between the clusters") {
  Rng rng(3);
  PointCloud cloud = points_at_height(500, -1.5, 0.5, 2.5, rng);
  const PointCloud upper = points_at_height(100, -0.2, 0.5, 2.5, rng);
  cloud.insert(cloud.end(), upper.begin(), upper.end());

  const GroundConfig cfg = test_config();
  const double ty = otsu_height_threshold(cloud, cfg);
  CHECK(ty > -1.5);
  CHECK(ty < -0.2);
  CHECK(ty == oracles::otsu_threshold_exhaustive(cloud, cfg.tz, cfg.otsu_bins));
}

TEST_CASE("otsu: three clusters match the exhaustive oracle exactly") {
  Rng rng(5);
  PointCloud cloud = points_at_height(400, -1.5, 0.5, 2.5, rng, 0.02);
  PointCloud mid = points_at_height(250, -0.8, 0.5, 2.5, rng, 0.02);
  PointCloud top = points_at_height(150, -0.1, 0.5, 2.5, rng, 0.02);
  cloud.insert(cloud.end(), mid.begin(), mid.end());
  cloud.insert(cloud.end(), top.begin(), top.end());

  const GroundConfig cfg = test_config();
  CHECK(otsu_height_threshold(cloud, cfg) ==
        oracles::otsu_threshold_exhaustive(cloud, cfg.tz, cfg.otsu_bins));
}

TEST_CASE("otsu: degenerate and undersized inputs throw") {
  Rng rng(7);
  const GroundConfig cfg = test_config();
  CHECK_THROWS_AS(otsu_height_threshold(points_at_height(500, -1.5, 0.5, 2.5, rng), cfg),
                  std::invalid_argument);  // all y identical
  CHECK_THROWS_AS(otsu_height_threshold(points_at_height(5, -1.5, 0.5, 2.5, rng, 0.05), cfg),
                  std::invalid_argument);  // too few points
  // points beyond tz do not count toward the minimum
  CHECK_THROWS_AS(otsu_height_threshold(points_at_height(500, -1.5, 4.0, 9.0, rng, 0.05), cfg),
                  std::invalid_argument);
}

TEST_CASE("otsu split index: random histograms equal the exhaustive oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int bins = 16 + static_cast<int>(rng.bounded(64));
    std::vector<std::int64_t> counts(bins, 0);
    const int filled = 1 + static_cast<int>(rng.bounded(bins));
    for (int i = 0; i < filled; ++i) {
      counts[rng.bounded(bins)] = static_cast<std::int64_t>(rng.bounded(1000));
    }
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) counts[rng.bounded(bins)] = 1;

    CHECK(otsu_split_index(counts) == oracles::otsu_exhaustive(counts));
  }
}

TEST_CASE("blend: weighted combination and fixed point") {
  GroundConfig cfg = test_config();
  GroundState state;

  // first frame passes the roi value through
  CHECK(blend_threshold(-1.2, state, cfg) == doctest::Approx(-1.2));

  state.initialized = true;
  state.ty_pre = -1.4;
  CHECK(blend_threshold(-1.2, state, cfg) == doctest::Approx(0.6 * -1.2 + 0.4 * -1.4));

  cfg.lambda = 1.0;
  cfg.mu = 0.0;
  CHECK(blend_threshold(-1.2, state, cfg) == doctest::Approx(-1.2));

  cfg.lambda = 0.6;
  cfg.mu = 0.4;
  state.ty_pre = -1.3;
  CHECK(blend_threshold(-1.3, state, cfg) == doctest::Approx(-1.3));
}

TEST_CASE("blend: convexity keeps the result between the inputs") {
  Rng rng(13);
  GroundConfig cfg = test_config();
  GroundState state;
  state.initialized = true;
  for (int i = 0; i < 200; ++i) {
    cfg.lambda = rng.unit();
    cfg.mu = 1.0 - cfg.lambda;
    const double roi = rng.uniform(-3.0, 0.0);
    state.ty_pre = rng.uniform(-3.0, 0.0);
    const double ty = blend_threshold(roi, state, cfg);
    CHECK(ty >= std::min(roi, state.ty_pre) - 1e-12);
    CHECK(ty <= std::max(roi, state.ty_pre) + 1e-12);
  }
}

TEST_CASE("select_candidates: exact predicate") {
  GroundConfig cfg = test_config();
  const PointCloud cloud = {
      {0.0, -1.5, 2.0, -1, -1},  // kept
      {0.0, -1.0, 2.0, -1, -1},  // height fails
      {0.0, -1.5, 3.5, -1, -1},  // range fails
      {0.0, -1.5, 0.0, -1, -1},  // z must be strictly positive
  };
  const PointCloud out = select_candidates(cloud, -1.3, cfg);
  REQUIRE(out.size() == 1);
  CHECK(out[0].y == doctest::Approx(-1.5));
}

TEST_CASE("ransac: noiseless plane to machine precision") {
  Rng rng(17);
  const PointCloud cloud = points_at_height(300, -1.5, 0.5, 2.8, rng);
  const GroundPlane plane = fit_plane_ransac(cloud, test_config(), 42);
  CHECK(std::abs(plane.a) < 1e-9);
  CHECK(plane.b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(plane.c) < 1e-9);
  CHECK(plane.d == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("ransac: noisy floor with outliers matches the reference fit") {
  Rng rng(19);
  PointCloud inliers = points_at_height(300, -1.5, 0.5, 2.8, rng, 0.01);
  PointCloud cloud = inliers;
  for (int i = 0; i < 30; ++i) {
    cloud.push_back({rng.uniform(-1.5, 1.5), rng.uniform(-1.2, 0.5), rng.uniform(0.3, 2.9),
                     -1, -1});
  }

  const GroundPlane plane = fit_plane_ransac(cloud, test_config(), 7);
  const double angle =
      std::acos(std::clamp(plane.b, -1.0, 1.0)) * 180.0 / M_PI;
  CHECK(angle < 1.0);
  CHECK(std::abs(plane.d - 1.5) < 0.01);

  const oracles::PlaneFit ref = oracles::plane_least_squares(inliers);
  const double dot = plane.a * ref.a + plane.b * ref.b + plane.c * ref.c;
  CHECK(std::acos(std::clamp(dot, -1.0, 1.0)) * 180.0 / M_PI < 1.0);
  CHECK(std::abs(plane.d - ref.d) < 0.01);
}

TEST_CASE("ransac: determinism and error paths") {
  Rng rng(23);
  PointCloud cloud = points_at_height(200, -1.5, 0.5, 2.8, rng, 0.01);

  const GroundPlane p1 = fit_plane_ransac(cloud, test_config(), 99);
  const GroundPlane p2 = fit_plane_ransac(cloud, test_config(), 99);
  CHECK(p1.a == p2.a);
  CHECK(p1.b == p2.b);
  CHECK(p1.c == p2.c);
  CHECK(p1.d == p2.d);

  CHECK_THROWS_AS(fit_plane_ransac(PointCloud(5), test_config(), 1), std::invalid_argument);

  PointCloud collinear;
  GroundConfig tiny = test_config();
  tiny.min_ground_points = 5;
  for (int i = 0; i < 10; ++i) collinear.push_back({0.1 * i, -1.0, 0.2 * i + 0.5, -1, -1});
  CHECK_THROWS_AS(fit_plane_ransac(collinear, tiny, 1), std::runtime_error);
}

TEST_CASE("ransac: normalization invariant on random fits") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    PointCloud cloud = points_at_height(150, rng.uniform(-2.0, -1.0), 0.5, 2.8, rng, 0.02);
    const GroundPlane p = fit_plane_ransac(cloud, test_config(), trial);
    CHECK(std::abs(p.a * p.a + p.b * p.b + p.c * p.c - 1.0) < 1e-12);
    CHECK(p.b >= 0.0);
  }
}

TEST_CASE("pitch angle: constructed normals") {
  CHECK(ground_pitch_angle({0.0, 1.0, 0.0, 1.5}) == doctest::Approx(0.0));
  const double tilt = 10.0 * M_PI / 180.0;
  CHECK(ground_pitch_angle({0.0, std::cos(tilt), std::sin(tilt), 1.5}) ==
        doctest::Approx(10.0).epsilon(1e-9));
  CHECK(ground_pitch_angle({1.0, 0.0, 0.0, 0.0}) == doctest::Approx(90.0));
}

TEST_CASE("classify: band edges and grade sign") {
  GroundConfig cfg = test_config();  // band [3, 15] degrees

  const double half_deg = 0.5 * M_PI / 180.0;
  CHECK(classify_ground({0.0, std::cos(half_deg), std::sin(half_deg), 1.5}, cfg) ==
        GroundClass::horizontal);

  // 6 degree tilt rising along +Z: normal tips backward (c < 0)
  const double six = 6.0 * M_PI / 180.0;
  CHECK(classify_ground({0.0, std::cos(six), -std::sin(six), 1.5}, cfg) == GroundClass::upslope);
  CHECK(classify_ground({0.0, std::cos(six), std::sin(six), 1.5}, cfg) ==
        GroundClass::downslope);

  const double steep = 25.0 * M_PI / 180.0;
  CHECK(classify_ground({0.0, std::cos(steep), std::sin(steep), 1.5}, cfg) ==
        GroundClass::non_ground);
}

TEST_CASE("refine: tolerance band membership") {
  GroundConfig cfg = test_config();
  cfg.sigma = 0.02;
  const GroundPlane plane{0.0, 1.0, 0.0, 1.5};
  const PointCloud f_init = {
      {0.0, -1.5, 1.0, -1, -1},  // on the plane
      {0.0, -1.4, 1.0, -1, -1},  // 0.1 away, dropped
  };
  const PointCloud f = refine_ground(f_init, plane, cfg);
  REQUIRE(f.size() == 1);
  CHECK(f[0].y == doctest::Approx(-1.5));

  // boundary is inclusive; 0.25 and -1.75 are exact in binary
  cfg.sigma = 0.25;
  CHECK(refine_ground({{0.0, -1.75, 1.0, -1, -1}}, plane, cfg).size() == 1);

  cfg.sigma = std::numeric_limits<double>::infinity();
  CHECK(refine_ground(f_init, plane, cfg).size() == f_init.size());
}

TEST_CASE("refine: monotone in sigma and always a subset") {
  Rng rng(31);
  PointCloud f_init = points_at_height(300, -1.5, 0.5, 2.8, rng, 0.05);
  const GroundPlane plane{0.0, 1.0, 0.0, 1.5};
  GroundConfig cfg = test_config();

  std::size_t previous = 0;
  for (double sigma : {0.01, 0.03, 0.08, 0.2}) {
    cfg.sigma = sigma;
    const PointCloud f = refine_ground(f_init, plane, cfg);
    CHECK(f.size() >= previous);
    CHECK(f.size() <= f_init.size());
    previous = f.size();
  }
}

TEST_CASE("ground height: mean of y") {
  CHECK(ground_height({{0, -1.5, 1, -1, -1}, {0, -1.49, 1, -1, -1}, {0, -1.51, 1, -1, -1}}) ==
        doctest::Approx(-1.5));
  CHECK(ground_height({{0, -1.2, 1, -1, -1}}) == doctest::Approx(-1.2));
  CHECK_THROWS_AS(ground_height({}), std::invalid_argument);

  Rng rng(37);
  PointCloud big = points_at_height(100000, -1.5, 0.5, 2.8, rng, 0.01);
  CHECK(std::abs(ground_height(big) + 1.5) < 1e-3);
}

TEST_CASE("detect_ground: flat floor initializes the state") {
  Rng rng(41);
  PointCloud cloud = points_at_height(2000, -1.5, 0.5, 2.8, rng, 0.01);
  const PointCloud upper = points_at_height(400, 0.2, 0.5, 2.8, rng, 0.05);
  cloud.insert(cloud.end(), upper.begin(), upper.end());

  GroundState state;
  const GroundConfig cfg = test_config();
  const GroundResult result = detect_ground(cloud, state, cfg, 1);

  REQUIRE(result.cls == GroundClass::horizontal);
  REQUIRE(result.plane.has_value());
  CHECK(std::abs(result.plane->b - 1.0) < 1e-3);
  CHECK(std::abs(result.height_h + 1.5) < 0.01);
  CHECK(state.initialized);
  CHECK(state.ty_pre == doctest::Approx(result.height_h + cfg.height_margin));
  CHECK_FALSE(result.refined.empty());
}

TEST_CASE("detect_ground: table distractor rejected with temporal state") {
  // floor 30%, dominant tabletop 45%, high background 25%; the per-frame
  // threshold admits the table, the carried height does not
  Rng rng(43);
  PointCloud cloud = points_at_height(600, -1.5, 1.0, 2.8, rng, 0.005);
  const PointCloud table = points_at_height(900, -0.7, 0.8, 2.0, rng, 0.005);
  const PointCloud wall = points_at_height(500, 0.5, 2.0, 2.8, rng, 0.1);
  cloud.insert(cloud.end(), table.begin(), table.end());
  cloud.insert(cloud.end(), wall.begin(), wall.end());

  const GroundConfig cfg = test_config();

  GroundState fresh;  // memoryless: fit this frame alone
  const GroundResult baseline = detect_ground(cloud, fresh, cfg, 5);
  REQUIRE(baseline.cls != GroundClass::non_ground);
  CHECK(std::abs(baseline.height_h + 0.7) < 0.05);  // picks the table

  GroundState seeded;
  seeded.initialized = true;
  seeded.ty_pre = -1.5 + cfg.height_margin;
  const GroundResult temporal = detect_ground(cloud, seeded, cfg, 5);
  REQUIRE(temporal.cls != GroundClass::non_ground);
  CHECK(std::abs(temporal.height_h + 1.5) < 0.03);  // keeps the floor
}

TEST_CASE("detect_ground: steep ramp reports non_ground and keeps state") {
  Rng rng(47);
  const double slope = 30.0 * M_PI / 180.0;
  PointCloud cloud;
  for (int i = 0; i < 2000; ++i) {
    const double z = rng.uniform(0.5, 2.8);
    cloud.push_back({rng.uniform(-1.5, 1.5), -1.5 + std::tan(slope) * z + rng.gaussian(0, 0.01),
                     z, -1, -1});
  }
  // background mass above the ramp so the histogram is not degenerate
  const PointCloud wall = points_at_height(500, 1.5, 0.5, 2.8, rng, 0.3);
  cloud.insert(cloud.end(), wall.begin(), wall.end());

  GroundState state;
  state.initialized = true;
  state.ty_pre = -0.2;

  const GroundConfig cfg = test_config();
  const GroundResult result = detect_ground(cloud, state, cfg, 9);
  CHECK(result.cls == GroundClass::non_ground);
  CHECK_FALSE(result.reason.empty());
  CHECK(result.refined.empty());
  CHECK(state.ty_pre == doctest::Approx(-0.2));  // untouched
}

TEST_CASE("detect_ground: determinism") {
  Rng rng(53);
  PointCloud cloud = points_at_height(1500, -1.4, 0.5, 2.8, rng, 0.01);
  const PointCloud upper = points_at_height(300, 0.0, 0.5, 2.8, rng, 0.1);
  cloud.insert(cloud.end(), upper.begin(), upper.end());

  GroundState s1, s2;
  const GroundResult r1 = detect_ground(cloud, s1, test_config(), 77);
  const GroundResult r2 = detect_ground(cloud, s2, test_config(), 77);
  CHECK(r1.cls == r2.cls);
  CHECK(r1.height_h == r2.height_h);
  CHECK(r1.plane->a == r2.plane->a);
  CHECK(r1.plane->d == r2.plane->d);
  CHECK(r1.refined.size() == r2.refined.size());
}

TEST_CASE("config validation names the offending field") {
  GroundConfig cfg = test_config();
  cfg.lambda = 0.7;  // breaks lambda + mu = 1
  CHECK_THROWS_WITH_AS(validate(cfg), "ground config: lambda + mu must equal 1",
                       std::invalid_argument);
  cfg = test_config();
  cfg.otsu_bins = 8;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

}  // TEST_SUITE
