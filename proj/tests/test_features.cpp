#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "lunar/features.hpp"
#include "lunar/filters.hpp"
#include "lunar/fixation.hpp"
#include "lunar/testkit.hpp"
#include "oracles.hpp"

using namespace lunar;

namespace {

Image from_fn(int w, int h, auto fn) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = fn(x, y);
  return img;
}

// Bright quadrant with its corner at (cx, cy).
Image corner_image(int w, int h, int cx, int cy) {
  return from_fn(w, h, [&](int x, int y) { return (x >= cx && y >= cy) ? 200.0 : 20.0; });
}

}  // namespace

TEST_CASE("image_gradients") {
  SUBCASE("ramp x") {
    const auto g = image_gradients(from_fn(6, 5, [](int x, int) { return double(x); }));
    for (int y = 1; y < 4; ++y)
      for (int x = 1; x < 5; ++x) {
        CHECK(g.gx.at(x, y) == 1.0);
        CHECK(g.gy.at(x, y) == 0.0);
      }
    CHECK(g.gx.at(0, 2) == 0.0);  // border is zero
    CHECK(g.gx.at(5, 2) == 0.0);
  }
  SUBCASE("ramp 2x has slope 2") {
    const auto g = image_gradients(from_fn(6, 5, [](int x, int) { return 2.0 * x; }));
    CHECK(g.gx.at(2, 2) == 2.0);
  }
  SUBCASE("constant") {
    const auto g = image_gradients(Image(5, 5, 9.0));
    for (double v : g.gx.pixels()) CHECK(v == 0.0);
    for (double v : g.gy.pixels()) CHECK(v == 0.0);
  }
  SUBCASE("product xy") {
    const auto g = image_gradients(from_fn(7, 6, [](int x, int y) { return double(x * y); }));
    for (int y = 1; y < 5; ++y)
      for (int x = 1; x < 6; ++x) {
        CHECK(g.gx.at(x, y) == y);
        CHECK(g.gy.at(x, y) == x);
      }
  }
  SUBCASE("too small") { CHECK_THROWS_AS(image_gradients(Image(2, 2)), BoundsError); }
}

TEST_CASE("structure_tensor_at") {
  SUBCASE("constant") {
    const auto t = structure_tensor_at(image_gradients(Image(7, 7, 3.0)), {3, 3}, 1);
    CHECK(t == StructureTensor{0, 0, 0});
  }
  SUBCASE("ramp, 3x3 patch") {
    const auto t = structure_tensor_at(image_gradients(from_fn(7, 7, [](int x, int) { return double(x); })),
                                       {3, 3}, 1);
    CHECK(t == StructureTensor{9, 0, 0});
  }
  SUBCASE("corner patch matches longhand sums") {
    const Image img = corner_image(12, 12, 6, 6);
    const auto g = image_gradients(img);
    const auto t = structure_tensor_at(g, {6, 6}, 2);
    long double a = 0, b = 0, c = 0;
    for (int y = 4; y <= 8; ++y)
      for (int x = 4; x <= 8; ++x) {
        const double ix = (img.at(x + 1, y) - img.at(x - 1, y)) / 2, iy = (img.at(x, y + 1) - img.at(x, y - 1)) / 2;
        a += ix * ix;
        b += ix * iy;
        c += iy * iy;
      }
    CHECK(t.a == double(a));
    CHECK(t.b == double(b));
    CHECK(t.c == double(c));
    CHECK(t.a > 0);
    CHECK(t.c > 0);
    CHECK(t.a * t.c - t.b * t.b > 0);
  }
  SUBCASE("patch touching the border") {
    const auto g = image_gradients(Image(7, 7));
    CHECK_THROWS_AS(structure_tensor_at(g, {1, 3}, 1), BoundsError);
    CHECK_THROWS_AS(structure_tensor_at(g, {3, 5}, 1), BoundsError);
    CHECK_NOTHROW(structure_tensor_at(g, {2, 4}, 1));
  }
}

TEST_CASE("accept_pixel") {
  CHECK_FALSE(accept_pixel({0, 0, 0}, 1500));
  CHECK(accept_pixel({4000, 0, 3000}, 1500));
  CHECK(min_eigenvalue({4000, 0, 3000}) == 3000.0);
  CHECK_FALSE(accept_pixel({4000, 0, 1000}, 1500));
  CHECK(min_eigenvalue({4000, 0, 1000}) == 1000.0);
  // Both eigenvalues below the threshold: P > 0 but a < lambda.
  CHECK_FALSE(accept_pixel({1000, 0, 1200}, 1500));
}

TEST_CASE("accept_pixel agrees with the eigenvalue oracle") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 10000) {
    const double a = 1e4 * u(rng), c = 1e4 * u(rng);
    const double b = (2 * u(rng) - 1) * std::sqrt(a * c);
    const double lambda = 1e4 * u(rng) + 1e-3;
    const long double l2 = oracle::min_eig(a, b, c);
    if (std::abs(static_cast<double>(l2) - lambda) <= 1e-6) continue;
    CHECK(accept_pixel({a, b, c}, lambda) == (l2 > lambda));
    ++checked;
  }
}

TEST_CASE("detect_features") {
  const DetectorConfig cfg;

  SUBCASE("constant sub-image") { CHECK(detect_features(Image(20, 20, 80.0), cfg, 0).empty()); }

  SUBCASE("single corner gives one feature, same as the eigenvalue reference") {
    const Image img = corner_image(20, 20, 10, 9);
    const auto got = detect_features(img, cfg, 7);
    const auto want = oracle::reference_detector(img, 1, 1500, 2, 10);
    REQUIRE(got.size() == 1);
    REQUIRE(want.size() == 1);
    CHECK(got[0].pos == PixelPos{double(want[0].x), double(want[0].y)});
    CHECK(got[0].parent_template == 7);
    CHECK(std::abs(got[0].pos.x - 10) <= 1);
    CHECK(std::abs(got[0].pos.y - 9) <= 1);
  }

  SUBCASE("terrain sub-images: reference agreement and contracts") {
    const Image terrain = testkit::generate_terrain(12, 320, 240, 30);
    IdSource ids;
    const auto ex = extract_templates(contrast_map(terrain, {5, 5}, 4, 4), TemplateSpec{}, {5, 5}, terrain, ids);
    int total = 0;
    for (const auto& tpl : ex.templates) {
      const auto got = detect_features(tpl.patch, cfg, tpl.id);
      const auto want = oracle::reference_detector(tpl.patch, 1, 1500, 2, 10);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].pos == PixelPos{double(want[i].x), double(want[i].y)});
        CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-12));
      }
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].score > cfg.lambda_t);
        CHECK(got[i].pos.x >= 2);
        CHECK(got[i].pos.x <= 17);
        if (i > 0) CHECK(got[i - 1].score >= got[i].score);
        for (std::size_t j = 0; j < i; ++j) {
          CHECK(std::max(std::abs(got[i].pos.x - got[j].pos.x), std::abs(got[i].pos.y - got[j].pos.y)) >
                cfg.nms_radius);
        }
      }
      total += static_cast<int>(got.size());
    }
    CHECK(total >= 1);
  }

  SUBCASE("max_features and min_separation") {
    std::mt19937_64 rng(4);
    const Image img = oracle::random_image(rng, 40, 40);
    DetectorConfig c = cfg;
    c.max_features = 3;
    CHECK(detect_features(img, c, 0).size() == 3);
    c.max_features = 100;
    c.min_separation = 8;
    const auto pts = detect_features(img, c, 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        CHECK(std::max(std::abs(pts[i].pos.x - pts[j].pos.x), std::abs(pts[i].pos.y - pts[j].pos.y)) >= 8);
  }

  SUBCASE("too small for a single patch") { CHECK(detect_features(Image(4, 4), cfg, 0).empty()); }
}

TEST_CASE("detection is translation-equivariant") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const Image content = oracle::random_image(rng, 16, 16);
    std::uniform_int_distribution<int> sh(0, 8);
    const int dx = sh(rng), dy = sh(rng);
    Image a(32, 32, 100.0), b(32, 32, 100.0);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        a.at(x + 4, y + 4) = content.at(x, y);
        b.at(x + 4 + dx, y + 4 + dy) = content.at(x, y);
      }
    DetectorConfig c;
    c.max_features = 1000;
    const auto pa = detect_features(a, c, 0);
    const auto pb = detect_features(b, c, 0);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(pb[i].pos.x == pa[i].pos.x + dx);
      CHECK(pb[i].pos.y == pa[i].pos.y + dy);
      CHECK(pb[i].score == pa[i].score);
    }
  }
}
