#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "entdyn/error.hpp"
#include "entdyn/raster.hpp"

using namespace entdyn;
using namespace entdyn::raster;
using orbit::Status;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("entdyn_" + name)).string();
}

PixelGrid blank(int w, int h, Status s) {
  PixelGrid g;
  g.window = {0, 1, 0, 1, w, h};
  g.max_iter = 10;
  g.status.assign(static_cast<std::size_t>(w * h), s);
  g.escape_iteration.assign(g.status.size(), s == Status::escaped ? 0 : -1);
  g.labels.assign(g.status.size(), 0);
  return g;
}

// Pixel-center count of |z| <= 1 on the 256x256 grid over [-2,2]^2.
std::size_t disc_mask_count() {
  const Window w{-2, 2, -2, 2, 256, 256};
  std::size_t n = 0;
  for (int r = 0; r < 256; ++r) {
    for (int c = 0; c < 256; ++c) n += std::abs(pixel_center(w, c, r)) <= 1.0 ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST_CASE("pixel centers") {
  const Window w{-3, 3, -3, 3, 257, 257};
  CHECK(pixel_center(w, 128, 128) == ComplexValue{0, 0});
  CHECK(pixel_center(w, 0, 128).imag() == 0.0);
  CHECK(pixel_center(w, 0, 0).real() < pixel_center(w, 1, 0).real());
  CHECK(pixel_center(w, 0, 0).imag() > pixel_center(w, 0, 1).imag());
  CHECK_THROWS_AS(validate(Window{1, 0, 0, 1, 8, 8}), Error);
  CHECK_THROWS_AS(validate(Window{0, 1, 0, 1, 7, 8}), Error);
}

TEST_CASE("unit disc for z^2") {
  const auto sq = make_poly({{0, 0}, {0, 0}, {1, 0}});
  PixelGrid g = render_k_set(sq, {-2, 2, -2, 2, 256, 256}, {256, 1e3, 1e6});
  const RasterStats s = compute_stats(g);
  CHECK(s.bounded_fraction == doctest::Approx(kPi / 16).epsilon(0.02));
  CHECK(s.component_count_8 == 1);
  CHECK(s.component_count_4 >= s.component_count_8);
  CHECK(s.bounded_fraction + s.escaped_fraction + s.undetermined_fraction == doctest::Approx(1.0));

  // Pixels on |z| = 1 up to rounding are orbit-ambiguous, the rest match the mask exactly.
  const auto mask = static_cast<double>(disc_mask_count());
  CHECK(static_cast<double>(g.count(Status::bounded)) == doctest::Approx(mask).epsilon(0.01));

  const auto gray = gray_levels(g);
  const std::size_t centre = g.index(128, 128);
  const std::size_t corner = g.index(0, 0);
  CHECK(gray[centre] == 0);
  CHECK(gray[corner] > 160);
}

TEST_CASE("basin of the attracting fixed point") {
  PixelGrid g = render_k_set(make_lambda_exp(0.3), {-2, 4, -3, 3, 256, 256}, {});
  CHECK(g.count(Status::bounded) > 0);
  // 0.4894 lies in the pixel containing it.
  const int col = static_cast<int>((0.4894 + 2) / 6 * 256);
  const int row = 128;
  CHECK(g.status[g.index(col, row)] == Status::bounded);
}

TEST_CASE("Chebyshev segment") {
  const Window w{-3, 3, -3, 3, 257, 257};
  const PixelGrid g = render_k_set(make_quadratic({-2, 0}), w, {});
  int on_segment = 0;
  for (int c = 0; c < 257; ++c) {
    if (std::abs(pixel_center(w, c, 128).real()) <= 2.0) {
      ++on_segment;
      CHECK(g.status[g.index(c, 128)] == Status::bounded);
    }
  }
  CHECK(on_segment > 150);
}

TEST_CASE("Fatou function has a sparse bounded set") {
  // Orbits in the right half-plane drift by about +1 per step, so the budget has to
  // outlast the drift to the bound radius before the bounded pixels thin out.
  const Window small{-2, 6, -4, 4, 64, 64};
  double prev = 1.0;
  for (int iters : {64, 256, 2000}) {
    const PixelGrid g = render_k_set(make_fatou(), small, {iters, 1e3, 1e8});
    const double frac = static_cast<double>(g.count(Status::bounded)) / static_cast<double>(g.size());
    CHECK(frac <= prev);
    prev = frac;
  }
  const PixelGrid g = render_k_set(make_fatou(), {-2, 6, -4, 4, 256, 256}, {2000, 1e3, 1e8});
  CHECK(static_cast<double>(g.count(Status::bounded)) / static_cast<double>(g.size()) < 0.05);
}

TEST_CASE("component labels") {
  PixelGrid g = blank(8, 8, Status::escaped);
  CHECK(label_components(g, Connectivity::eight).count == 0);

  // Two diagonal pixels and a separate 2x2 block.
  g.status[g.index(0, 0)] = Status::bounded;
  g.status[g.index(1, 1)] = Status::bounded;
  for (int r = 4; r < 6; ++r) {
    for (int c = 4; c < 6; ++c) g.status[g.index(c, r)] = Status::bounded;
  }
  g.status[g.index(7, 7)] = Status::undetermined;
  const Components four = label_components(g, Connectivity::four);
  CHECK(four.count == 3);
  CHECK(four.sizes == std::vector<std::size_t>{4, 1, 1});
  const Components eight = label_components(g, Connectivity::eight);
  CHECK(eight.count == 2);
  CHECK(eight.sizes == std::vector<std::size_t>{4, 2});
  CHECK(g.labels[g.index(0, 0)] == g.labels[g.index(1, 1)]);
  CHECK(g.labels[g.index(7, 7)] == 0);
  CHECK(g.labels[g.index(3, 3)] == 0);
}

TEST_CASE("thick components") {
  PixelGrid g = blank(16, 16, Status::escaped);
  for (int r = 2; r < 9; ++r) {
    for (int c = 2; c < 9; ++c) g.status[g.index(c, r)] = Status::bounded;
  }
  g.status[g.index(13, 13)] = Status::bounded;
  CHECK(count_thick_components(g, Connectivity::eight) == 1);
  CHECK(label_components(g, Connectivity::eight).count == 2);
}

TEST_CASE("PGM output") {
  const PixelGrid g = blank(8, 8, Status::escaped);
  const std::string bytes = encode_pgm(g);
  CHECK(bytes.rfind("P5\n8 8\n255\n", 0) == 0);
  CHECK(bytes.size() == 11 + 64);

  const std::string path = temp_path("roundtrip.pgm");
  const auto sq = make_poly({{0, 0}, {0, 0}, {1, 0}});
  const PixelGrid disc = render_k_set(sq, {-2, 2, -2, 2, 64, 48}, {64, 1e3, 1e6});
  write_image(disc, path);
  const GrayImage img = read_pgm(path);
  CHECK(img.width == 64);
  CHECK(img.height == 48);
  CHECK(img.pixels == gray_levels(disc));
  std::ifstream in(path, std::ios::binary);
  const std::string on_disk((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(on_disk == encode_pgm(disc));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(write_image(g, "/nonexistent-dir/x.pgm"), Error);
  CHECK_THROWS_AS(read_pgm("/nonexistent-dir/x.pgm"), Error);
}

TEST_CASE("PNG output") {
  const std::string path = temp_path("grid.png");
  write_image(blank(8, 8, Status::bounded), path, ImageFormat::png);
  std::ifstream in(path, std::ios::binary);
  char sig[8] = {};
  in.read(sig, 8);
  CHECK(std::string(sig + 1, 3) == "PNG");
  std::filesystem::remove(path);
}

TEST_CASE("gray levels") {
  PixelGrid g = blank(8, 8, Status::escaped);
  g.escape_iteration[1] = 10;
  g.status[2] = Status::undetermined;
  g.status[3] = Status::bounded;
  const auto gray = gray_levels(g);
  CHECK(gray[0] == 255);
  CHECK(gray[1] == 160);
  CHECK(gray[2] == 128);
  CHECK(gray[3] == 0);
}
