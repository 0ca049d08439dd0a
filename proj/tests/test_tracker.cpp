#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lunar/features.hpp"
#include "lunar/testkit.hpp"
#include "lunar/tracker.hpp"
#include "oracles.hpp"

using namespace lunar;

namespace {

Image from_fn(int w, int h, auto fn) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = fn(x, y);
  return img;
}

FeaturePoint at(double x, double y, int id = 0) {
  FeaturePoint fp;
  fp.id = id;
  fp.pos = {x, y};
  return fp;
}

}  // namespace

TEST_CASE("flow_system") {
  const FlowConfig cfg;

  SUBCASE("identical frames: e = 0, residual 0") {
    std::mt19937_64 rng(1);
    const Image img = oracle::random_image(rng, 20, 20);
    const auto sys = flow_system(img, img, {10, 10}, {}, cfg);
    CHECK(sys.e[0] == 0.0);
    CHECK(sys.e[1] == 0.0);
    CHECK(sys.residual == 0.0);
  }
  SUBCASE("paraboloid shifted by +1 in x pushes e toward +x") {
    const Image prev = from_fn(16, 16, [](int x, int y) { return double(x * x + y * y); });
    const Image next = from_fn(16, 16, [](int x, int y) { return double((x - 1) * (x - 1) + y * y); });
    const auto sys = flow_system(prev, next, {7, 7}, {}, cfg);
    CHECK(sys.e[0] > 0.0);
    // Longhand: gx = 2x, gy = 2y, It = 1 - 2x over x, y in 4..10.
    double e0 = 0, e1 = 0;
    for (int y = 4; y <= 10; ++y)
      for (int x = 4; x <= 10; ++x) {
        e0 -= 2.0 * x * (1.0 - 2.0 * x);
        e1 -= 2.0 * y * (1.0 - 2.0 * x);
      }
    CHECK(sys.e[0] == e0);
    CHECK(sys.e[1] == e1);
  }
  SUBCASE("G is the detector's structure tensor on the same window") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
      const Image prev = oracle::random_image(rng, 30, 30, t % 2 == 0);
      const Image next = oracle::random_image(rng, 30, 30);
      std::uniform_int_distribution<int> c(4, 25);
      const PixelIndex p{c(rng), c(rng)};
      const auto sys = flow_system(prev, next, p.to_pos(), {0.3, -0.7}, cfg);
      CHECK(sys.g == structure_tensor_at(image_gradients(prev), p, cfg.window_radius));
    }
  }
  SUBCASE("windows leaving the frames throw") {
    const Image img(20, 20, 1.0);
    CHECK_THROWS_AS(flow_system(img, img, {3, 10}, {}, cfg), BoundsError);
    CHECK_THROWS_AS(flow_system(img, img, {10, 10}, {7.5, 0}, cfg), BoundsError);
    CHECK_NOTHROW(flow_system(img, img, {4, 10}, {12, 0}, cfg));
  }
}

TEST_CASE("solve_flow is Cramer's rule") {
  const auto d = solve_flow({4, 1, 3}, {6, 5});
  // [[4,1],[1,3]] x = [6,5] -> x = (13/11, 14/11)
  CHECK(d.dx == doctest::Approx(13.0 / 11));
  CHECK(d.dy == doctest::Approx(14.0 / 11));
}

TEST_CASE("track_feature") {
  const FlowConfig cfg;
  const testkit::SmoothSurface surf(7);

  SUBCASE("identical frames converge to zero at once") {
    const Image img = surf.render(40, 40);
    const auto st = track_feature(img, img, at(20, 20), cfg);
    CHECK(st.tracked());
    CHECK(st.d.dx == 0.0);
    CHECK(st.d.dy == 0.0);
    CHECK(st.residual == 0.0);
    CHECK(st.iterations == 1);
  }
  SUBCASE("flat window is singular") {
    const Image img(40, 40, 90.0);
    CHECK(track_feature(img, img, at(20, 20), cfg).outcome == TrackOutcome::SingularSystem);
  }
  SUBCASE("a straight edge is singular (aperture)") {
    const Image edge = from_fn(40, 40, [](int x, int) { return x < 20 ? 10.0 : 200.0; });
    CHECK(track_feature(edge, edge, at(20, 20), cfg).outcome == TrackOutcome::SingularSystem);
  }
  SUBCASE("subpixel shift is recovered") {
    const Image prev = surf.render(40, 40);
    const Image next = surf.render(40, 40, 0.5, -0.25);
    const auto st = track_feature(prev, next, at(20, 20), cfg);
    REQUIRE(st.tracked());
    CHECK(std::abs(st.d.dx - 0.5) < 0.05);
    CHECK(std::abs(st.d.dy + 0.25) < 0.05);
  }
  SUBCASE("feature window outside the previous frame") {
    const Image img = surf.render(40, 40);
    CHECK(track_feature(img, img, at(2, 20), cfg).outcome == TrackOutcome::OutOfBounds);
  }
  SUBCASE("mismatched content gives high residual or no convergence") {
    std::mt19937_64 rng(9);
    const Image a = oracle::random_image(rng, 40, 40);
    const Image b = oracle::random_image(rng, 40, 40);
    FlowConfig c = cfg;
    c.max_residual = 1.0;
    const auto st = track_feature(a, b, at(20, 20), c);
    CHECK_FALSE(st.tracked());
  }
  SUBCASE("single-iteration mode returns the first solve unchanged") {
    const Image prev = surf.render(40, 40);
    const Image next = surf.render(40, 40, 0.8, 0.6);
    FlowConfig one = cfg;
    one.max_iterations = 1;
    const auto st = track_feature(prev, next, at(20, 20), one);
    const auto sys = flow_system(prev, next, {20, 20}, {}, one);
    const auto d = solve_flow(sys.g, sys.e);
    CHECK(st.iterations == 1);
    CHECK(st.d.dx == d.dx);
    CHECK(st.d.dy == d.dy);
  }
  SUBCASE("invalid configuration throws") {
    FlowConfig bad = cfg;
    bad.epsilon = 0;
    const Image img = surf.render(40, 40);
    CHECK_THROWS(track_feature(img, img, at(20, 20), bad));
  }
}

TEST_CASE("forward and backward estimates are symmetric") {
  const FlowConfig cfg;
  testkit::Rng rng(13);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const testkit::SmoothSurface surf(100 + t);
    const double dx = rng.uniform(-1, 1), dy = rng.uniform(-1, 1);
    const Image a = surf.render(48, 48);
    const Image b = surf.render(48, 48, dx, dy);
    const auto fwd = track_feature(a, b, at(24, 24), cfg);
    REQUIRE(fwd.tracked());
    // Backward from the forward end point should land back on (24, 24).
    const auto bwd = track_feature(b, a, at(24 + fwd.d.dx, 24 + fwd.d.dy), cfg);
    REQUIRE(bwd.tracked());
    worst = std::max(worst, std::hypot(fwd.d.dx + bwd.d.dx, fwd.d.dy + bwd.d.dy));
  }
  MESSAGE("worst round-trip gap " << worst << " px");
  CHECK(worst <= 0.05);
}

TEST_CASE("subpixel accuracy on smooth surfaces") {
  const FlowConfig cfg;
  testkit::Rng rng(17);
  std::vector<double> err;
  for (int t = 0; t < 100; ++t) {
    const testkit::SmoothSurface surf(500 + t);
    double dx, dy;
    do {
      dx = rng.uniform(-2, 2);
      dy = rng.uniform(-2, 2);
    } while (std::hypot(dx, dy) > 2.0);
    const auto st = track_feature(surf.render(48, 48), surf.render(48, 48, dx, dy), at(24, 24), cfg);
    err.push_back(st.tracked() ? std::hypot(st.d.dx - dx, st.d.dy - dy) : 1e9);
  }
  std::sort(err.begin(), err.end());
  MESSAGE("median error " << err[49] << " px, p95 " << err[94] << " px");
  CHECK(err[49] < 0.1);
}

TEST_CASE("track_all") {
  const FlowConfig cfg;

  SUBCASE("no features") {
    const Image img(30, 30, 1.0);
    CHECK(track_all(img, img, {}, cfg).empty());
  }
  SUBCASE("integer translation of terrain") {
    const auto scene = testkit::translation_scene(3, 2, {2, 1}, 160, 120, 10);
    const Image f0 = testkit::render_frame(scene, 0).image;
    const Image f1 = testkit::render_frame(scene, 1).image;
    auto fps = detect_features(f0, DetectorConfig{1, 1500, 2, 30, 0}, 0);
    std::erase_if(fps, [](const FeaturePoint& p) {
      return p.pos.x < 8 || p.pos.y < 8 || p.pos.x > 150 || p.pos.y > 110;
    });
    REQUIRE(fps.size() >= 5);
    for (std::size_t i = 0; i < fps.size(); ++i) fps[i].id = static_cast<int>(i) + 100;

    const auto unseeded = track_all(f0, f1, fps, cfg);
    REQUIRE(unseeded.size() == fps.size());
    int ok = 0;
    for (std::size_t i = 0; i < fps.size(); ++i) {
      CHECK(unseeded[i].first == fps[i].id);
      if (!unseeded[i].second.tracked()) continue;
      ++ok;
      CHECK(std::abs(unseeded[i].second.d.dx - 2) < 0.05);
      CHECK(std::abs(unseeded[i].second.d.dy - 1) < 0.05);
    }
    CHECK(ok * 10 >= static_cast<int>(fps.size()) * 8);

    // Seeded with the true motion the first solve is already exact.
    const std::vector<Displacement> seeds(fps.size(), Displacement{2, 1});
    for (const auto& [id, st] : track_all(f0, f1, fps, cfg, seeds)) {
      REQUIRE(st.tracked());
      CHECK(st.d.dx == 2.0);
      CHECK(st.d.dy == 1.0);
      CHECK(st.iterations == 1);
    }
    CHECK_THROWS(track_all(f0, f1, fps, cfg, std::span(seeds).first(1)));
  }
  SUBCASE("content scrolled past the border is out of bounds") {
    const testkit::SmoothSurface surf(3);
    const Image a = surf.render(40, 40);
    const Image b = surf.render(40, 40, 1, 0);
    const std::vector<FeaturePoint> fps{at(35, 20, 1)};
    const std::vector<Displacement> seeds{{3, 0}};
    const auto out = track_all(a, b, fps, cfg, seeds);
    CHECK(out[0].second.outcome == TrackOutcome::OutOfBounds);
  }
}
