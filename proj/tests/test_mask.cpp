#include <doctest.h>

#include "oracles.hpp"
#include "walksense/mask.hpp"
#include "walksense/rng.hpp"

using namespace walksense;

namespace {

Mask from_rows(const std::vector<std::string>& rows) {
  Mask mask(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (rows[y][x] == '#') mask.set(x, y);
    }
  }
  return mask;
}

bool equal(const Mask& a, const Mask& b) {
  return a.width == b.width && a.height == b.height && a.data == b.data;
}

}  // namespace

TEST_SUITE("mask") {

TEST_CASE("closing bridges a one-pixel gap between two blobs") {
  const Mask mask = from_rows({
      "##.##",
      "##.##",
  });
  const Mask closed = morph_close(mask, 1);
  // hand evaluation: dilation fills the full 2x5 block (and beyond, off
  // image), erosion keeps exactly the 2x5 block
  CHECK(closed.count() == 10);
  CHECK(connected_components(closed).size() == 1);
}

TEST_CASE("closing never removes pixels and is idempotent") {
  Rng rng(211);
  for (int trial = 0; trial < 30; ++trial) {
    Mask mask(24, 18);
    for (auto& v : mask.data) v = rng.unit() < 0.35 ? 1 : 0;
    for (int radius : {1, 2}) {
      const Mask once = morph_close(mask, radius);
      for (std::size_t i = 0; i < mask.data.size(); ++i) {
        if (mask.data[i]) CHECK(once.data[i]);
      }
      CHECK(equal(morph_close(once, radius), once));
    }
  }
}

TEST_CASE("connected components: count, order, bounding boxes") {
  const Mask mask = from_rows({
      "##....#",
      "##....#",
      ".......",
      "....##.",
  });
  const auto comps = connected_components(mask);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].pixels.size() == 4);  // discovered first (row-major)
  CHECK(comps[0].min_x == 0);
  CHECK(comps[0].max_x == 1);
  CHECK(comps[1].pixels.size() == 2);
  CHECK(comps[1].min_x == 6);
  CHECK(comps[2].min_y == 3);
}

TEST_CASE("connected components: diagonal pixels join (8-connectivity)") {
  const Mask mask = from_rows({
      "#..",
      ".#.",
      "..#",
  });
  CHECK(connected_components(mask).size() == 1);
}

TEST_CASE("centroid: square, singleton, L-shape against brute force") {
  std::vector<Pixel> square;
  for (int y = 10; y <= 20; ++y) {
    for (int x = 10; x <= 20; ++x) square.push_back({x, y});
  }
  const auto [cx, cy] = region_centroid(square);
  CHECK(cx == doctest::Approx(15.0));
  CHECK(cy == doctest::Approx(15.0));

  const auto single = region_centroid({{7, 9}});
  CHECK(single.first == doctest::Approx(7.0));
  CHECK(single.second == doctest::Approx(9.0));

  std::vector<Pixel> ell;
  for (int y = 0; y < 8; ++y) ell.push_back({0, y});
  for (int x = 1; x < 5; ++x) ell.push_back({x, 7});
  const auto got = region_centroid(ell);
  const auto want = oracles::centroid_brute_force(ell);
  CHECK(got.first == doctest::Approx(want.first).epsilon(1e-9));
  CHECK(got.second == doctest::Approx(want.second).epsilon(1e-9));

  CHECK_THROWS_AS(region_centroid({}), std::invalid_argument);
}

TEST_CASE("centroid: random regions match brute force exactly") {
  Rng rng(223);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Pixel> region;
    const int n = 1 + static_cast<int>(rng.bounded(400));
    for (int i = 0; i < n; ++i) {
      region.push_back({static_cast<int>(rng.bounded(640)), static_cast<int>(rng.bounded(480))});
    }
    const auto got = region_centroid(region);
    const auto want = oracles::centroid_brute_force(region);
    CHECK(std::abs(got.first - want.first) < 1e-9);
    CHECK(std::abs(got.second - want.second) < 1e-9);
  }
}

TEST_CASE("boundary trace: filled square keeps only the rim") {
  std::vector<Pixel> square;
  for (int y = 3; y < 8; ++y) {
    for (int x = 3; x < 8; ++x) square.push_back({x, y});
  }
  const auto boundary = trace_boundary(square);
  CHECK(boundary.size() == 16);  // 5x5 square rim
  for (const Pixel& p : boundary) {
    CHECK((p.first == 3 || p.first == 7 || p.second == 3 || p.second == 7));
  }
}

TEST_CASE("boundary trace: degenerate shapes") {
  CHECK(trace_boundary({{5, 5}}).size() == 1);

  std::vector<Pixel> line;
  for (int x = 0; x < 6; ++x) line.push_back({x, 2});
  const auto boundary = trace_boundary(line);
  CHECK(boundary.size() >= 6);  // traces out and back along the line
  CHECK(trace_boundary({}).empty());
}

}  // TEST_SUITE
