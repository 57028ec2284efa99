#include <doctest.h>

#include "walksense/metrics.hpp"
#include "walksense/rng.hpp"

using namespace walksense;

namespace {

Mask random_mask(int w, int h, double density, Rng& rng) {
  Mask mask(w, h);
  for (auto& v : mask.data) v = rng.unit() < density ? 1 : 0;
  return mask;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("overlap ratio: literal evaluations") {
  Mask a(20, 10), b(20, 10);
  for (int i = 0; i < 100; ++i) {
    a.data[i] = 1;
    b.data[i] = 1;
  }
  CHECK(ground_iou(a, b) == 0.5);  // identical masks hit the metric's maximum exactly

  Mask disjoint(20, 10);
  for (int i = 100; i < 200; ++i) disjoint.data[i] = 1;
  CHECK(ground_iou(a, disjoint) == 0.0);

  // 50 overlapping pixels of 100 + 100
  Mask shifted(20, 10);
  for (int i = 50; i < 150; ++i) shifted.data[i] = 1;
  CHECK(ground_iou(a, shifted) == doctest::Approx(0.25));
}

TEST_CASE("overlap ratio: empty masks and dimension mismatch") {
  CHECK(ground_iou(Mask(8, 8), Mask(8, 8)) == 0.0);
  CHECK_THROWS_AS(ground_iou(Mask(8, 8), Mask(8, 9)), std::invalid_argument);
}

TEST_CASE("overlap ratio: symmetry and bound on random pairs") {
  Rng rng(401);
  for (int trial = 0; trial < 300; ++trial) {
    const Mask a = random_mask(24, 16, rng.unit(), rng);
    const Mask b = random_mask(24, 16, rng.unit(), rng);
    const double ab = ground_iou(a, b);
    const double ba = ground_iou(b, a);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(ab <= 0.5);
  }
}

TEST_CASE("precision curve: perfect and empty detectors") {
  const int w = 16, h = 16;
  std::vector<Mask> truths, perfect, empty;
  std::vector<DepthFrame> depths;

  Rng rng(403);
  for (int f = 0; f < 8; ++f) {
    Mask truth(w, h);
    DepthFrame depth;
    depth.width = w;
    depth.height = h;
    depth.values.assign(w * h, 0.0f);
    for (int i = 0; i < w * h; ++i) {
      depth.values[i] = static_cast<float>(rng.uniform(0.2, 2.8));
      truth.data[i] = rng.unit() < 0.6 ? 1 : 0;
    }
    truths.push_back(truth);
    perfect.push_back(truth);
    empty.push_back(Mask(w, h));
    depths.push_back(depth);
  }

  const std::vector<DistanceBand> bands = {{0.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}};
  const std::vector<double> thresholds = {0.4};
  const PrecisionReport report =
      precision_curve(perfect, empty, truths, depths, bands, thresholds);

  for (std::size_t b = 0; b < bands.size(); ++b) {
    CHECK(report.temporal[b][0].precision == 1.0);  // identical masks score 0.5 >= 0.4
    CHECK(report.baseline[b][0].precision == 0.0);
    CHECK(report.temporal[b][0].eligible_frames == 8);
  }
}

TEST_CASE("precision curve: bands without truth pixels are skipped") {
  const int w = 8, h = 8;
  Mask truth(w, h);
  truth.set(0, 0);
  DepthFrame depth;
  depth.width = w;
  depth.height = h;
  depth.values.assign(w * h, 1.5f);  // everything lives in [1, 2)

  const PrecisionReport report = precision_curve({truth}, {truth}, {truth}, {depth},
                                                 {{0.0, 1.0}, {1.0, 2.0}}, {0.4});
  CHECK(report.temporal[0][0].eligible_frames == 0);
  CHECK(report.temporal[0][0].precision == 0.0);
  CHECK(report.temporal[1][0].eligible_frames == 1);
  CHECK(report.temporal[1][0].precision == 1.0);
}

TEST_CASE("precision curve: length mismatch throws") {
  CHECK_THROWS_AS(precision_curve({}, {}, {Mask(4, 4)}, {}, {{0.0, 1.0}}, {0.4}),
                  std::invalid_argument);
}

TEST_CASE("format: table mentions every band") {
  PrecisionReport report;
  report.bands = {{0.0, 1.0}, {1.0, 2.0}};
  report.thresholds = {0.4};
  report.temporal = {{{1.0, 5}}, {{0.8, 5}}};
  report.baseline = {{{0.6, 5}}, {{0.2, 5}}};
  const std::string table = format_precision_table(report);
  CHECK(table.find("0.0-1.0") != std::string::npos);
  CHECK(table.find("1.0-2.0") != std::string::npos);
  CHECK(table.find("0.40") != std::string::npos);
}

}  // TEST_SUITE
