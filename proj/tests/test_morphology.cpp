#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "agglo/morphology.hpp"
#include "agglo/raster.hpp"
#include "support.hpp"

using namespace agglo;
using testing_support::naive_dilate;

namespace {
BinaryImage single_pixel(int size) {
  BinaryImage img(size, size);
  img.set(size / 2, size / 2);
  return img;
}

// Trace recomputed with per-pixel dilation and the labeling Euler number.
std::vector<std::int64_t> oracle_trace(BinaryImage img, const ThickeningSchedule& s) {
  std::vector<std::int64_t> chis{euler_by_components(img)};
  for (StructuringElement e : s.steps) {
    img = naive_dilate(img, e == StructuringElement::kSquare);
    chis.push_back(euler_by_components(img));
  }
  return chis;
}
}  // namespace

TEST_CASE("elements applied to a single pixel") {
  const BinaryImage px = single_pixel(9);
  const BinaryImage cross = dilate(px, StructuringElement::kCross);
  const BinaryImage square = dilate(px, StructuringElement::kSquare);
  CHECK(cross.count_foreground() == 5);
  CHECK(cross.get(4, 3));
  CHECK(cross.get(3, 4));
  CHECK_FALSE(cross.get(3, 3));
  CHECK(square.count_foreground() == 9);
  CHECK(square.get(3, 3));
  CHECK(square.get(5, 5));
}

TEST_CASE("default schedule reproduces the digital disk counts") {
  const ThickeningSchedule s = default_schedule();
  REQUIRE(s.length() == 10);
  CHECK(s.skip_prefix == 1);
  const std::vector<std::size_t> expected{1, 9, 21, 37, 69, 97, 129, 185, 229, 277};
  BinaryImage img = single_pixel(41);
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(img.count_foreground() == expected[k]);
    img = dilate(img, s.steps[k]);
  }
}

TEST_CASE("schedule element sequences") {
  const std::string counted = "II I I II I I II I I II";
  const auto text = [](const ThickeningSchedule& s) {
    std::string out;
    for (auto e : s.steps) out += (out.empty() ? "" : " ") + std::string(e == StructuringElement::kSquare ? "II" : "I");
    return out;
  };
  CHECK(text(default_schedule()) == counted);
  CHECK(text(make_schedule(10, ScheduleVariant::kPrinted)) == "II I I I II I I II I I");
  CHECK(make_schedule(13).length() == 13);
  CHECK(default_schedule().descriptor().rfind("count-matched:n1=1:", 0) == 0);
  CHECK_THROWS(make_schedule(3, ScheduleVariant::kCountMatched, 3));
  CHECK_THROWS(make_schedule(3, ScheduleVariant::kCountMatched, -1));
  CHECK(parse_schedule_variant("printed") == ScheduleVariant::kPrinted);
  CHECK(parse_schedule_variant("count-matched") == ScheduleVariant::kCountMatched);
  CHECK_THROWS(parse_schedule_variant("octagon"));
}

TEST_CASE("grown areas track the Euclidean disk") {
  BinaryImage img = single_pixel(41);
  const ThickeningSchedule s = default_schedule();
  for (int k = 1; k < 10; ++k) {
    img = dilate(img, s.steps[k - 1]);
    const double ideal = std::numbers::pi * (k + 0.5) * (k + 0.5);
    const double dev = std::abs(static_cast<double>(img.count_foreground()) - ideal) / ideal;
    if (k >= 2) CHECK(dev <= 0.09);
    if (k >= 5) CHECK(dev <= 0.05);
  }
}

TEST_CASE("grown octagon is symmetric under the lattice group") {
  BinaryImage img = single_pixel(41);
  for (auto e : default_schedule().steps) img = dilate(img, e);
  CHECK(img.rotated90() == img);
  CHECK(img.mirrored_horizontal() == img);
  CHECK(img.mirrored_vertical() == img);
}

TEST_CASE("packed dilation matches per-pixel dilation") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> size(1, 140);
  for (int trial = 0; trial < 150; ++trial) {
    const BinaryImage img = testing_support::random_image(rng, size(rng), size(rng), 0.03 + 0.002 * trial);
    CHECK(dilate(img, StructuringElement::kCross) == naive_dilate(img, false));
    CHECK(dilate(img, StructuringElement::kSquare) == naive_dilate(img, true));
  }
}

TEST_CASE("dilation is extensive, monotone and translation equivariant") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryImage a = testing_support::random_image(rng, 70, 50, 0.05);
    BinaryImage b = a;
    for (int i = 0; i < 40; ++i) b.set(static_cast<int>(rng() % 70), static_cast<int>(rng() % 50));
    for (auto e : {StructuringElement::kCross, StructuringElement::kSquare}) {
      const BinaryImage da = dilate(a, e);
      CHECK(testing_support::subset(a, da));
      CHECK(testing_support::subset(da, dilate(b, e)));
    }
    // shift by (3, 2) with a clear margin
    BinaryImage inner(70, 50), shifted(70, 50);
    for (int y = 5; y < 40; ++y)
      for (int x = 5; x < 60; ++x)
        if (a.get(x, y)) {
          inner.set(x, y);
          shifted.set(x + 3, y + 2);
        }
    const BinaryImage di = dilate(inner, StructuringElement::kSquare);
    const BinaryImage ds = dilate(shifted, StructuringElement::kSquare);
    for (int y = 0; y < 47; ++y)
      for (int x = 0; x < 66; ++x) CHECK(di.get(x, y) == ds.get(x + 3, y + 2));
  }
}

TEST_CASE("single disk trace stays at one") {
  Configuration c;
  c.box_size = 100;
  c.centers = {{50.3, 49.8}};
  const EulerTrace t = thicken_trace(rasterize(c), default_schedule());
  CHECK(t.chis == std::vector<std::int64_t>(11, 1));
  CHECK(t.areas.size() == 11);
}

TEST_CASE("empty image trace is all zeros") {
  const EulerTrace t = thicken_trace(BinaryImage(50, 50), default_schedule());
  CHECK(t.chis == std::vector<std::int64_t>(11, 0));
  CHECK(t.areas == std::vector<std::size_t>(11, 0));
}

TEST_CASE("two disks merge at the step found by brute force") {
  for (double gap : {3.0, 2.0, 6.0, 9.5}) {
    Configuration c;
    c.box_size = 120;
    c.centers = {{40.5, 60.5}, {40.5 + 20.0 + gap, 60.5}};
    const BinaryImage img = rasterize(c);
    const ThickeningSchedule s = default_schedule();
    const EulerTrace t = thicken_trace(img, s);
    const auto oracle = oracle_trace(img, s);
    CHECK(t.chis == oracle);
    CHECK(t.chis.front() == 2);
    CHECK(t.chis.back() == 1);
  }
}

TEST_CASE("trace areas grow until the frame saturates") {
  std::mt19937_64 rng(8);
  const BinaryImage img = testing_support::random_image(rng, 30, 30, 0.01);
  const EulerTrace t = thicken_trace(img, make_schedule(25));
  for (std::size_t i = 1; i < t.areas.size(); ++i) {
    if (t.areas[i - 1] < 900u) CHECK(t.areas[i] > t.areas[i - 1]);
    else CHECK(t.areas[i] == 900u);
  }
}

TEST_CASE("trace is invariant under rotation and mirror") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryImage img = testing_support::random_image(rng, 90, 90, 0.01);
    const EulerTrace t = thicken_trace(img, default_schedule());
    CHECK(thicken_trace(img.rotated90(), default_schedule()).chis == t.chis);
    CHECK(thicken_trace(img.mirrored_horizontal(), default_schedule()).chis == t.chis);
    CHECK(thicken_trace(img.mirrored_vertical(), default_schedule()).chis == t.chis);
  }
}

TEST_CASE("observer sees every step") {
  int calls = 0;
  BinaryImage last;
  thicken_trace(single_pixel(41), default_schedule(), Connectivity::k8_4, [&](int step, const BinaryImage& m) {
    CHECK(step == calls);
    ++calls;
    last = m;
  });
  CHECK(calls == 11);
  CHECK(last.count_foreground() > 277);
}
