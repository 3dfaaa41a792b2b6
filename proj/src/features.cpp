#include "imgrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <opencv2/core.hpp>

#include "imgrank/error.hpp"

namespace imgrank {

namespace {

constexpr int kCanonicalMultiple = 24;
constexpr int kCanonicalMinSide = kContrastGrid * kContrastBlock;

// [begin, end) of cell i when n samples are split into k cells.
std::pair<int, int> cell_range(int n, int k, int i) {
  return {static_cast<int>(static_cast<long>(i) * n / k), static_cast<int>(static_cast<long>(i + 1) * n / k)};
}

int level_bin(double value, std::size_t bins) {
  const auto b = static_cast<long>(std::floor(value * static_cast<double>(bins)));
  return static_cast<int>(std::clamp<long>(b, 0, static_cast<long>(bins) - 1));
}

void normalize_l1(std::span<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total <= 0.0) return;
  for (double& x : v) x /= total;
}

std::vector<double> region_histogram(const HsvImage& img, int channel) {
  std::vector<double> out(kRegionGrid * kRegionGrid * kLevelBins, 0.0);
  for (int y = 0; y < img.height(); ++y) {
    const int row = static_cast<int>(static_cast<long>(y) * kRegionGrid / img.height());
    for (int x = 0; x < img.width(); ++x) {
      const int col = static_cast<int>(static_cast<long>(x) * kRegionGrid / img.width());
      const std::size_t cell = static_cast<std::size_t>(row * kRegionGrid + col);
      out[cell * kLevelBins + level_bin(img.at(x, y, channel), kLevelBins)] += 1.0;
    }
  }
  for (std::size_t cell = 0; cell < kRegionGrid * kRegionGrid; ++cell) {
    normalize_l1(std::span(out).subspan(cell * kLevelBins, kLevelBins));
  }
  return out;
}

// Copy of rows/cols [x0, x0+w) x [y0, y0+h), replicating edges for
// coordinates outside the source.
RgbImage crop_replicate(const RgbImage& img, int x0, int y0, int w, int h) {
  RgbImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = std::clamp(y0 + y, 0, img.height() - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = std::clamp(x0 + x, 0, img.width() - 1);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(sx, sy, c);
    }
  }
  return out;
}

std::pair<int, int> canonical_extent(int n) {
  if (n >= kCanonicalMinSide) {
    const int kept = n - n % kCanonicalMultiple;
    return {(n - kept) / 2, kept};
  }
  return {-(kCanonicalMinSide - n) / 2, kCanonicalMinSide};
}

}  // namespace

const std::vector<double>& FeatureBlock::param(int n) const {
  switch (n) {
    case 1: return p_contrast;
    case 2: return p_brightness;
    case 3: return p_saturation;
    case 4: return p_sharpness;
    default:
      throw Error(ErrorKind::InvalidArgument, "features",
                  "parameter index must be 1..4, got " + std::to_string(n));
  }
}

std::vector<double>& FeatureBlock::param(int n) {
  return const_cast<std::vector<double>&>(std::as_const(*this).param(n));
}

RgbImage canonical_resize(const RgbImage& img, int long_side) {
  if (long_side < kCanonicalMinSide) {
    throw Error(ErrorKind::InvalidArgument, "features", "canonical size must be at least 96");
  }
  const double scale = static_cast<double>(long_side) / std::max(img.width(), img.height());
  const int w = std::max(1, static_cast<int>(std::lround(img.width() * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(img.height() * scale)));
  RgbImage scaled = resize_image(img, w, h);
  const auto [x0, cw] = canonical_extent(w);
  const auto [y0, ch] = canonical_extent(h);
  if (x0 == 0 && y0 == 0 && cw == w && ch == h) return scaled;
  return crop_replicate(scaled, x0, y0, cw, ch);
}

std::vector<double> hsv_histogram(const HsvImage& img, const HueBinTable& bins) {
  if (bins.bin_count() != kHueBins) {
    throw Error(ErrorKind::DimensionMismatch, "features",
                "hue-bin table has " + std::to_string(bins.bin_count()) + " bins; the visual histogram needs " +
                    std::to_string(kHueBins));
  }
  std::vector<double> hist(kVisualDim, 0.0);
  auto px = img.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const std::size_t h = bins.bin_of(px[i]);
    const int s = level_bin(px[i + 1], kSatBins);
    const int v = level_bin(px[i + 2], kValBins);
    hist[(h * kSatBins + s) * kValBins + v] += 1.0;
  }
  normalize_l1(hist);
  return hist;
}

std::vector<double> contrast_feature(const RgbImage& img) {
  const int min_side = kContrastGrid * kContrastBlock;
  if (img.width() < min_side || img.height() < min_side) {
    throw Error(ErrorKind::InvalidArgument, "features",
                "image too small for the contrast grid (" + std::to_string(img.width()) + "x" +
                    std::to_string(img.height()) + ", need " + std::to_string(min_side) + "x" +
                    std::to_string(min_side) + ")");
  }
  const std::vector<double> gray = grayscale(img);
  const int width = img.width();
  std::vector<double> out(kParamDim, 0.0);
  for (int gy = 0; gy < kContrastGrid; ++gy) {
    const auto [y0, y1] = cell_range(img.height(), kContrastGrid, gy);
    for (int gx = 0; gx < kContrastGrid; ++gx) {
      const auto [x0, x1] = cell_range(width, kContrastGrid, gx);
      double sum_contrast = 0.0;
      int blocks = 0;
      for (int by = y0; by + kContrastBlock <= y1; by += kContrastBlock) {
        for (int bx = x0; bx + kContrastBlock <= x1; bx += kContrastBlock) {
          const double ref = gray[static_cast<std::size_t>(by) * width + bx];
          double mean = 0.0;
          for (int y = by; y < by + kContrastBlock; ++y) {
            for (int x = bx; x < bx + kContrastBlock; ++x) mean += gray[static_cast<std::size_t>(y) * width + x] - ref;
          }
          mean /= kContrastBlock * kContrastBlock;
          double var = 0.0;
          for (int y = by; y < by + kContrastBlock; ++y) {
            for (int x = bx; x < bx + kContrastBlock; ++x) {
              const double d = gray[static_cast<std::size_t>(y) * width + x] - ref - mean;
              var += d * d;
            }
          }
          sum_contrast += std::sqrt(var / (kContrastBlock * kContrastBlock));
          ++blocks;
        }
      }
      out[static_cast<std::size_t>(gy * kContrastGrid + gx)] = sum_contrast / blocks;
    }
  }
  return out;
}

std::vector<double> brightness_feature(const HsvImage& img) { return region_histogram(img, 2); }

std::vector<double> saturation_feature(const HsvImage& img) { return region_histogram(img, 1); }

const std::array<double, kLevelBins>& sharpness_thresholds() {
  static const std::array<double, kLevelBins> thresholds = [] {
    std::array<double, kLevelBins> t{};
    for (std::size_t i = 0; i < kLevelBins; ++i) {
      t[i] = std::pow(10.0, -3.0 + 3.0 * static_cast<double>(i) / (kLevelBins - 1));
    }
    t.back() = 1.0;
    return t;
  }();
  return thresholds;
}

std::vector<double> sharpness_feature(const RgbImage& img) {
  const std::vector<double> gray = grayscale(img);
  const auto& thresholds = sharpness_thresholds();
  std::vector<double> out(kParamDim, 0.0);
  for (int gy = 0; gy < kRegionGrid; ++gy) {
    const auto [y0, y1] = cell_range(img.height(), kRegionGrid, gy);
    for (int gx = 0; gx < kRegionGrid; ++gx) {
      const auto [x0, x1] = cell_range(img.width(), kRegionGrid, gx);
      const int h = y1 - y0;
      const int w = x1 - x0;
      if (h <= 0 || w <= 0) continue;
      cv::Mat cell(h, w, CV_64F);
      for (int y = 0; y < h; ++y) {
        auto* row = cell.ptr<double>(y);
        for (int x = 0; x < w; ++x) row[x] = gray[static_cast<std::size_t>(y0 + y) * img.width() + x0 + x];
      }
      cv::Mat spectrum;
      cv::dft(cell, spectrum, cv::DFT_COMPLEX_OUTPUT);
      std::vector<double> magnitude;
      magnitude.reserve(static_cast<std::size_t>(h) * w);
      for (int y = 0; y < h; ++y) {
        const auto* row = spectrum.ptr<cv::Vec2d>(y);
        for (int x = 0; x < w; ++x) {
          if (x == 0 && y == 0) continue;
          magnitude.push_back(std::hypot(row[x][0], row[x][1]));
        }
      }
      const double peak = magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
      const double area = static_cast<double>(h) * w;
      // Below this the cell is flat up to round-off.
      if (peak <= 1e-9 * area) continue;
      const std::size_t base = static_cast<std::size_t>(gy * kRegionGrid + gx) * kLevelBins;
      for (std::size_t i = 0; i < kLevelBins; ++i) {
        const double cut = thresholds[i] * peak;
        const auto count = std::count_if(magnitude.begin(), magnitude.end(), [cut](double m) { return m > cut; });
        out[base + i] = static_cast<double>(count) / area;
      }
    }
  }
  return out;
}

FeatureBlock extract_features(const RgbImage& img, const HueBinTable& bins, int canonical_size) {
  const RgbImage canonical = canonical_resize(img, canonical_size);
  const HsvImage hsv = rgb_to_hsv(canonical);
  FeatureBlock fb;
  fb.visual = hsv_histogram(hsv, bins);
  fb.p_contrast = contrast_feature(canonical);
  fb.p_brightness = brightness_feature(hsv);
  fb.p_saturation = saturation_feature(hsv);
  fb.p_sharpness = sharpness_feature(canonical);
  return fb;
}

void check_feature_block(const FeatureBlock& fb) {
  if (fb.visual.size() != kVisualDim) {
    throw Error(ErrorKind::DimensionMismatch, "features",
                "visual feature has length " + std::to_string(fb.visual.size()) + ", expected " +
                    std::to_string(kVisualDim));
  }
  for (int n = 1; n <= static_cast<int>(kParamCount); ++n) {
    if (fb.param(n).size() != kParamDim) {
      throw Error(ErrorKind::DimensionMismatch, "features",
                  "parameter feature " + std::to_string(n) + " has length " + std::to_string(fb.param(n).size()) +
                      ", expected " + std::to_string(kParamDim));
    }
  }
}

std::vector<double> concat_3176(const FeatureBlock& fb) {
  check_feature_block(fb);
  std::vector<double> out;
  out.reserve(kDim3176);
  out.insert(out.end(), fb.visual.begin(), fb.visual.end());
  for (int n = 1; n <= static_cast<int>(kParamCount); ++n) out.insert(out.end(), fb.param(n).begin(), fb.param(n).end());
  return out;
}

std::vector<double> per_param_2744(const FeatureBlock& fb, int n) {
  const auto& param = fb.param(n);
  check_feature_block(fb);
  std::vector<double> out;
  out.reserve(kDim2744);
  out.insert(out.end(), fb.visual.begin(), fb.visual.end());
  out.insert(out.end(), param.begin(), param.end());
  return out;
}

ParamTriple scalar_params(const RgbImage& img) {
  auto px = img.data();
  const auto n = static_cast<double>(img.pixel_count());
  double sum_s = 0.0;
  double sum_v = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const Hsv hsv = rgb_to_hsv(Rgb{px[i], px[i + 1], px[i + 2]});
    sum_s += hsv.s;
    sum_v += hsv.v;
    sum += px[i] + px[i + 1] + px[i + 2];
  }
  const double mean = sum / (3.0 * n);
  double var = 0.0;
  for (double v : px) var += (v - mean) * (v - mean);
  return ParamTriple{sum_s / n, sum_v / n, std::sqrt(var / (3.0 * n))};
}

}  // namespace imgrank
