#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lunar/filters.hpp"
#include "oracles.hpp"

using namespace lunar;

TEST_CASE("average_subsample") {
  SUBCASE("constant image keeps its value") {
    const Image out = average_subsample(Image(25, 15, 10.0), {5, 5});
    CHECK(out.width() == 5);
    CHECK(out.height() == 3);
    for (double v : out.pixels()) CHECK(v == 10.0);
  }
  SUBCASE("5x5 ramp 0..24 averages to 12") {
    Image img(5, 5);
    double v = 0;
    for (auto& p : img.pixels()) p = v++;
    const Image out = average_subsample(img, {5, 5});
    CHECK(out == Image(1, 1, {12.0}));
  }
  SUBCASE("512x512 with 5x5 blocks drops the trailing pixels") {
    const Image out = average_subsample(Image(512, 512, 1.0), {5, 5});
    CHECK(out.width() == 102);
    CHECK(out.height() == 102);
  }
  SUBCASE("non-square interval") {
    const Image img(4, 2, {1, 3, 5, 7, 1, 3, 5, 7});
    CHECK(average_subsample(img, {2, 1}) == Image(2, 2, {2, 6, 2, 6}));
  }
  SUBCASE("image smaller than one block") {
    CHECK_THROWS_AS(average_subsample(Image(4, 10), {5, 5}), BoundsError);
    CHECK_THROWS_AS(average_subsample(Image(10, 10), {0, 5}), BoundsError);
  }
  SUBCASE("global mean over covered blocks is preserved") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
      const Image img = oracle::random_image(rng, 53, 41, false);
      const Image out = average_subsample(img, {5, 4});
      long double covered = 0;
      for (int y = 0; y < out.height() * 4; ++y)
        for (int x = 0; x < out.width() * 5; ++x) covered += img.at(x, y);
      covered /= static_cast<long double>(out.width() * 5) * (out.height() * 4);
      long double mean = 0;
      for (double v : out.pixels()) mean += v;
      mean /= out.size();
      CHECK(std::abs(static_cast<double>(mean - covered)) <= 1e-9 * std::abs(static_cast<double>(covered)));
    }
  }
}

TEST_CASE("laplacian_filter") {
  SUBCASE("constant image has zero interior") {
    const Image out = laplacian_filter(Image(6, 5, 5.0));
    for (int y = 1; y < 4; ++y)
      for (int x = 1; x < 5; ++x) CHECK(out.at(x, y) == 0.0);
  }
  SUBCASE("impulse response is the mask") {
    Image img(5, 5, 0.0);
    img.at(2, 2) = 1.0;
    const Image out = laplacian_filter(img);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) {
        const bool neighbour = std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1;
        const double expect = (x == 2 && y == 2) ? -8.0 : (neighbour ? 1.0 : 0.0);
        CHECK(out.at(x, y) == expect);
      }
  }
  SUBCASE("affine images vanish on the interior") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(-5, 5);
    for (int t = 0; t < 20; ++t) {
      const double a = d(rng), b = d(rng), c = d(rng);
      Image img(9, 7);
      for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x) img.at(x, y) = a * x + b * y + c;
      const Image out = laplacian_filter(img);
      for (int y = 1; y < 6; ++y)
        for (int x = 1; x < 8; ++x) CHECK(std::abs(out.at(x, y)) <= 1e-11);
    }
    Image ramp(6, 6);
    for (int y = 0; y < 6; ++y)
      for (int x = 0; x < 6; ++x) ramp.at(x, y) = x;
    CHECK(laplacian_filter(ramp).at(3, 3) == 0.0);
    CHECK(laplacian_filter(ramp).at(0, 3) != 0.0);  // border sees the zero padding
  }
  SUBCASE("matches the direct mask oracle including borders") {
    std::mt19937_64 rng(9);
    const Image img = oracle::random_image(rng, 31, 17);
    CHECK(laplacian_filter(img) == oracle::laplacian(img));
  }
  SUBCASE("too small") { CHECK_THROWS_AS(laplacian_filter(Image(2, 5)), BoundsError); }
}

TEST_CASE("variance_map") {
  SUBCASE("constant image") {
    const auto vm = variance_map(Image(8, 8, -3.5), 4, 4);
    for (double v : vm.cells.pixels()) CHECK(v == 0.0);
  }
  SUBCASE("2x2 window over {0,0,0,4}") {
    const auto vm = variance_map(Image(2, 2, {0, 0, 0, 4}), 2, 2);
    CHECK(vm.width() == 1);
    CHECK(vm.at(0, 0) == 3.0);
  }
  SUBCASE("4x4 window over 102x102 gives a 99x99 map") {
    const auto vm = variance_map(Image(102, 102), 4, 4);
    CHECK(vm.width() == 99);
    CHECK(vm.height() == 99);
    CHECK(vm.window_w == 4);
  }
  SUBCASE("window larger than image") { CHECK_THROWS_AS(variance_map(Image(3, 8), 4, 4), BoundsError); }
  SUBCASE("one-pass agrees with the two-pass oracle and never goes negative") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 10; ++t) {
      const Image f = laplacian_filter(oracle::random_image(rng, 40, 33, false));
      const auto vm = variance_map(f, 4, 3);
      const Image ref = oracle::two_pass_variance(f, 4, 3);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const double got = vm.cells.pixels()[i];
        CHECK(got >= 0.0);
        CHECK(std::abs(got - ref.pixels()[i]) <= 1e-6 * std::abs(ref.pixels()[i]) + 1e-9);
      }
    }
  }
  SUBCASE("large offset does not push cells negative") {
    std::mt19937_64 rng(11);
    Image f = oracle::random_image(rng, 20, 20, false, 1e6, 1e6 + 1e-3);
    const auto vm = variance_map(f, 4, 4);
    for (double v : vm.cells.pixels()) CHECK(v >= 0.0);
  }
}

TEST_CASE("contrast_map chains subsample, Laplacian, variance") {
  std::mt19937_64 rng(12);
  const Image frame = oracle::random_image(rng, 100, 60);
  const auto vm = contrast_map(frame, {5, 5}, 4, 4);
  const auto direct = variance_map(laplacian_filter(average_subsample(frame, {5, 5})), 4, 4);
  CHECK(vm.cells == direct.cells);
  CHECK(vm.width() == 17);
  CHECK(vm.height() == 9);
}
