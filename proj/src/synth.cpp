#include "imgrank/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "imgrank/binary_io.hpp"
#include "imgrank/degrade.hpp"
#include "imgrank/error.hpp"
#include "imgrank/random.hpp"

namespace imgrank {

namespace {

double wrap_hue(double h) {
  h = std::fmod(h, 360.0);
  return h < 0.0 ? h + 360.0 : h;
}

struct Shape {
  double cx, cy, rx, ry;
  Hsv color;
  bool ellipse;
};

}  // namespace

double theme_hue(std::size_t i) {
  static constexpr std::array<double, 6> themes{0.0, 35.0, 120.0, 210.0, 275.0, 180.0};
  return themes[i % themes.size()];
}

RgbImage synth_vivid_scene(std::uint64_t seed, double hue, const SceneOptions& options) {
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 1);
  const int w = options.width;
  const int h = options.height;
  RgbImage img(w, h);

  const double top_hue = wrap_hue(hue + rng.uniform(-15.0, 15.0));
  const double bottom_hue = wrap_hue(hue + rng.uniform(-25.0, 25.0));
  const double top_v = rng.uniform(0.75, 0.98);
  const double bottom_v = rng.uniform(0.35, 0.6);
  const double sat = rng.uniform(0.65, 0.95);

  std::vector<Shape> shapes;
  const int shape_count = 4 + static_cast<int>(rng.below(5));
  for (int i = 0; i < shape_count; ++i) {
    Shape s;
    s.cx = rng.uniform(0.0, w);
    s.cy = rng.uniform(0.0, h);
    s.rx = rng.uniform(0.06, 0.25) * w;
    s.ry = rng.uniform(0.06, 0.25) * h;
    const double offset = rng.uniform() < 0.3 ? 180.0 + rng.uniform(-30.0, 30.0) : rng.uniform(-40.0, 40.0);
    s.color = Hsv{wrap_hue(hue + offset), rng.uniform(0.6, 1.0), rng.uniform(0.5, 1.0)};
    s.ellipse = rng.uniform() < 0.6;
    shapes.push_back(s);
  }
  const double stripe_freq = rng.uniform(0.08, 0.3);
  const double stripe_angle = rng.uniform(0.0, std::numbers::pi);

  for (int y = 0; y < h; ++y) {
    const double t = static_cast<double>(y) / std::max(1, h - 1);
    for (int x = 0; x < w; ++x) {
      double dh = bottom_hue - top_hue;
      if (dh > 180.0) dh -= 360.0;
      if (dh < -180.0) dh += 360.0;
      Hsv px{wrap_hue(top_hue + t * dh), sat * (0.8 + 0.2 * t), top_v + t * (bottom_v - top_v)};
      for (const Shape& s : shapes) {
        const double nx = (x - s.cx) / s.rx;
        const double ny = (y - s.cy) / s.ry;
        const bool inside = s.ellipse ? nx * nx + ny * ny <= 1.0 : std::abs(nx) <= 1.0 && std::abs(ny) <= 1.0;
        if (inside) px = s.color;
      }
      const double phase = (x * std::cos(stripe_angle) + y * std::sin(stripe_angle)) * stripe_freq;
      px.v = std::clamp(px.v * (0.88 + 0.12 * std::sin(phase)) + 0.04 * (rng.uniform() - 0.5), 0.0, 1.0);
      const Rgb rgb = hsv_to_rgb(px);
      img.at(x, y, 0) = rgb.r;
      img.at(x, y, 1) = rgb.g;
      img.at(x, y, 2) = rgb.b;
    }
  }
  return img;
}

RgbImage synth_dull_scene(std::uint64_t seed, double hue, const SceneOptions& options) {
  Rng rng(seed ^ 0x5bd1e995ull);
  const GainSpec dull{rng.uniform(0.65, 0.8), rng.uniform(0.45, 0.65), rng.uniform(0.65, 0.8)};
  return apply_gains(synth_vivid_scene(seed, hue, options), dull);
}

std::vector<ManifestEntry> write_sample_corpus(const std::filesystem::path& dir, const SampleCorpusOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "synth", "cannot create " + dir.string());
  std::vector<ManifestEntry> manifest;
  std::vector<ManifestEntry> relative;
  auto add = [&](const std::string& name, Quality quality, const RgbImage& img) {
    save_image(img, dir / name);
    const auto id = static_cast<std::int64_t>(manifest.size());
    manifest.push_back({dir / name, quality, id});
    relative.push_back({name, quality, id});
  };
  char name[32];
  for (std::size_t i = 0; i < options.high_count; ++i) {
    std::snprintf(name, sizeof name, "high_%02zu.png", i);
    add(name, Quality::High, synth_vivid_scene(options.seed * 1000 + i, theme_hue(i), options.scene));
  }
  for (std::size_t i = 0; i < options.low_count; ++i) {
    std::snprintf(name, sizeof name, "low_%02zu.png", i);
    add(name, Quality::Low, synth_dull_scene(options.seed * 1000 + 500 + i, theme_hue(i), options.scene));
  }
  write_file_atomic(dir / "manifest.jsonl", format_corpus_manifest(relative), "synth");
  return manifest;
}

}  // namespace imgrank
