#include "imgrank/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imgrank/error.hpp"

namespace imgrank {

const DegradationTable& default_degradation_table() {
  static const DegradationTable table{{
      {0.35, 1.0, 1.0},
      {2.3, 1.0, 1.0},
      {1.0, 0.2, 1.0},
      {1.0, 2.6, 1.0},
      {1.0, 1.0, 0.3},
      {1.0, 1.0, 2.0},
      {0.5, 0.4, 0.5},
      {1.8, 2.0, 1.6},
  }};
  return table;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "degrade", "percentile of an empty sample");
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double lo_value = values[lo];
  if (hi == lo) return lo_value;
  const double hi_value = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return lo_value + (rank - static_cast<double>(lo)) * (hi_value - lo_value);
}

RgbImage auto_enhance(const RgbImage& img) {
  RgbImage out = img;
  auto px = out.data();
  const std::size_t n = img.pixel_count();
  std::vector<double> channel(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) channel[i] = px[3 * i + c];
    const double lo = percentile(channel, 1.0);
    const double hi = percentile(channel, 99.0);
    if (!(hi - lo > 1e-12)) continue;
    const double scale = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < n; ++i) {
      px[3 * i + c] = std::clamp((px[3 * i + c] - lo) * scale, 0.0, 1.0);
    }
  }
  return out;
}

RgbImage apply_gains(const RgbImage& img, const GainSpec& gains) {
  for (double g : {gains.brightness, gains.saturation, gains.contrast}) {
    if (!std::isfinite(g) || g < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "degrade", "gains must be finite and non-negative");
    }
  }
  RgbImage out = img;
  auto px = out.data();
  if (gains.contrast != 1.0) {
    const double mean = std::accumulate(px.begin(), px.end(), 0.0) / static_cast<double>(px.size());
    for (double& v : px) v = std::clamp(mean + gains.contrast * (v - mean), 0.0, 1.0);
  }
  if (gains.saturation != 1.0 || gains.brightness != 1.0) {
    for (std::size_t i = 0; i < px.size(); i += 3) {
      Hsv hsv = rgb_to_hsv(Rgb{px[i], px[i + 1], px[i + 2]});
      hsv.s = std::clamp(hsv.s * gains.saturation, 0.0, 1.0);
      hsv.v = std::clamp(hsv.v * gains.brightness, 0.0, 1.0);
      const Rgb rgb = hsv_to_rgb(hsv);
      px[i] = std::clamp(rgb.r, 0.0, 1.0);
      px[i + 1] = std::clamp(rgb.g, 0.0, 1.0);
      px[i + 2] = std::clamp(rgb.b, 0.0, 1.0);
    }
  }
  return out;
}

std::vector<RgbImage> degraded_versions(const RgbImage& img, const DegradationTable& table) {
  std::vector<RgbImage> out;
  out.reserve(table.size());
  for (const GainSpec& g : table) out.push_back(apply_gains(img, g));
  return out;
}

}  // namespace imgrank
