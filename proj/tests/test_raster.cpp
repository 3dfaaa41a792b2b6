#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "imgrank/error.hpp"
#include "imgrank/raster.hpp"
#include "support.hpp"

using namespace imgrank;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an imgrank::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("png decode of a 2x2 image") {
  support::TempDir dir("raster");
  RgbImage img(2, 2);
  const double px[4][3] = {{0, 0, 0}, {1, 1, 1}, {1, 0, 0}, {0, 1, 0}};
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 3; ++c) img.at(i % 2, i / 2, c) = px[i][c];
  }
  save_image(img, dir / "a.png");
  CHECK(load_image(dir / "a.png") == img);
}

TEST_CASE("png round trip is exact after 8-bit quantization") {
  support::TempDir dir("raster");
  RgbImage img = support::noise_image(3, 17, 9);
  for (double& v : img.data()) v = std::round(v * 255.0) / 255.0;
  save_image(img, dir / "n.png");
  CHECK(load_image(dir / "n.png") == img);
}

TEST_CASE("jpeg round trip stays within lossy tolerance") {
  support::TempDir dir("raster");
  RgbImage img(64, 48);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      img.at(x, y, 0) = x / 63.0;
      img.at(x, y, 1) = y / 47.0;
      img.at(x, y, 2) = 0.5;
    }
  }
  save_image(img, dir / "g.jpg");
  const RgbImage back = load_image(dir / "g.jpg");
  double worst = 0.0;
  for (std::size_t i = 0; i < img.data().size(); ++i) worst = std::max(worst, std::abs(img.data()[i] - back.data()[i]));
  CHECK(worst <= 0.05);
}

TEST_CASE("image i/o errors") {
  support::TempDir dir("raster");
  CHECK(kind_of([&] { load_image(dir / "nope.png"); }) == ErrorKind::MissingFile);
  std::ofstream(dir / "junk.png") << "not an image";
  CHECK(kind_of([&] { load_image(dir / "junk.png"); }) == ErrorKind::UnsupportedFormat);
  const RgbImage one = make_constant_image(1, 1, {0.2, 0.4, 0.6});
  CHECK(kind_of([&] { save_image(one, dir / "missing_dir" / "x.png"); }) == ErrorKind::Io);
  save_image(one, dir / "one.png");
  const RgbImage back = load_image(dir / "one.png");
  CHECK(back.width() == 1);
  CHECK(back.height() == 1);
}

TEST_CASE("rgb to hsv known colours") {
  const Hsv red = rgb_to_hsv(Rgb{1, 0, 0});
  CHECK(red.h == 0.0);
  CHECK(red.s == 1.0);
  CHECK(red.v == 1.0);
  const Hsv gray = rgb_to_hsv(Rgb{0.5, 0.5, 0.5});
  CHECK(gray.h == 0.0);
  CHECK(gray.s == 0.0);
  CHECK(gray.v == 0.5);
  const Hsv cyan = rgb_to_hsv(Rgb{0, 1, 1});
  CHECK(cyan.h == doctest::Approx(180.0));
  CHECK(cyan.s == 1.0);
  CHECK(cyan.v == 1.0);
}

TEST_CASE("hsv to rgb known colours and round trip") {
  const Rgb red = hsv_to_rgb(Hsv{0, 1, 1});
  CHECK(red.r == 1.0);
  CHECK(red.g == 0.0);
  CHECK(red.b == 0.0);
  const Rgb gray = hsv_to_rgb(Hsv{237.0, 0.0, 0.3});
  CHECK(gray.r == doctest::Approx(0.3));
  CHECK(gray.g == doctest::Approx(0.3));
  CHECK(gray.b == doctest::Approx(0.3));

  const RgbImage img = support::noise_image(11, 40, 30);
  const RgbImage back = hsv_to_rgb(rgb_to_hsv(img));
  double worst = 0.0;
  for (std::size_t i = 0; i < img.data().size(); ++i) worst = std::max(worst, std::abs(img.data()[i] - back.data()[i]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("lab conversion") {
  const LabColor white = rgb_to_lab({1, 1, 1});
  CHECK(white.L == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(std::abs(white.a) < 1e-6);
  CHECK(std::abs(white.b) < 1e-6);
  const LabColor black = rgb_to_lab({0, 0, 0});
  CHECK(black.L == 0.0);
  CHECK(black.a == 0.0);
  CHECK(black.b == 0.0);

  for (const Rgb c : {Rgb{1, 0, 0}, Rgb{0, 1, 0}, Rgb{0, 0, 1}, Rgb{0.2, 0.7, 0.4}, Rgb{0.9, 0.85, 0.1}}) {
    const LabColor got = rgb_to_lab(c);
    const LabColor ref = support::lab_reference(c);
    CHECK(std::abs(got.L - ref.L) < 0.01);
    CHECK(std::abs(got.a - ref.a) < 0.01);
    CHECK(std::abs(got.b - ref.b) < 0.01);
  }
}

TEST_CASE("ciede2000 published pairs") {
  const auto pairs = support::ciede2000_pairs();
  REQUIRE(pairs.size() == 34);
  for (const auto& p : pairs) {
    CHECK(std::abs(delta_e_2000(p.a, p.b) - p.expected) <= 1e-4);
    CHECK(delta_e_2000(p.a, p.b) == doctest::Approx(delta_e_2000(p.b, p.a)));
  }
  CHECK(delta_e_2000({50, 2.6772, -79.7751}, {50, 0, -82.7485}) == doctest::Approx(2.0425).epsilon(5e-5));
  CHECK(delta_e_2000({37, 12, -5}, {37, 12, -5}) == 0.0);
}

TEST_CASE("resize keeps constant images constant") {
  const RgbImage img = make_constant_image(30, 20, {0.1, 0.5, 0.9});
  for (const auto& [w, h] : {std::pair{60, 40}, std::pair{7, 5}}) {
    const RgbImage r = resize_image(img, w, h);
    CHECK(r.width() == w);
    CHECK(r.height() == h);
    CHECK(r.at(w / 2, h / 2, 2) == doctest::Approx(0.9));
  }
}
