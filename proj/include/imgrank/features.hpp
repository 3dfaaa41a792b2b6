#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "imgrank/hue_bins.hpp"
#include "imgrank/raster.hpp"

namespace imgrank {

inline constexpr std::size_t kHueBins = 26;
inline constexpr std::size_t kSatBins = 10;
inline constexpr std::size_t kValBins = 10;
inline constexpr std::size_t kVisualDim = kHueBins * kSatBins * kValBins;  // 2600
inline constexpr std::size_t kParamDim = 144;
inline constexpr std::size_t kParamCount = 4;
inline constexpr std::size_t kDim3176 = kVisualDim + kParamCount * kParamDim;
inline constexpr std::size_t kDim2744 = kVisualDim + kParamDim;

inline constexpr int kContrastGrid = 12;
inline constexpr int kContrastBlock = 8;
inline constexpr int kRegionGrid = 3;
inline constexpr std::size_t kLevelBins = 16;
inline constexpr int kDefaultCanonicalSize = 512;

/// Visual histogram plus the four parameter vectors of one image.
/// Parameter index n = 1..4 is contrast, brightness, saturation, sharpness.
struct FeatureBlock {
  std::vector<double> visual;
  std::vector<double> p_contrast;
  std::vector<double> p_brightness;
  std::vector<double> p_saturation;
  std::vector<double> p_sharpness;

  const std::vector<double>& param(int n) const;
  std::vector<double>& param(int n);

  friend bool operator==(const FeatureBlock&, const FeatureBlock&) = default;
};

/// Mean saturation, mean brightness (value) and pooled RGB standard deviation.
struct ParamTriple {
  double s = 0.0;
  double b = 0.0;
  double c = 0.0;

  friend auto operator<=>(const ParamTriple&, const ParamTriple&) = default;
};

/// Scales the longer side to `long_side`, then centre-crops each dimension to
/// a multiple of 24 (or edge-pads up to 24 when shorter).
RgbImage canonical_resize(const RgbImage& img, int long_side = kDefaultCanonicalSize);

std::vector<double> hsv_histogram(const HsvImage& img, const HueBinTable& bins);
std::vector<double> contrast_feature(const RgbImage& img);
std::vector<double> brightness_feature(const HsvImage& img);
std::vector<double> saturation_feature(const HsvImage& img);
std::vector<double> sharpness_feature(const RgbImage& img);

/// The 16 log-spaced magnitude thresholds, 1e-3 .. 1.
const std::array<double, kLevelBins>& sharpness_thresholds();

FeatureBlock extract_features(const RgbImage& img, const HueBinTable& bins,
                              int canonical_size = kDefaultCanonicalSize);

std::vector<double> concat_3176(const FeatureBlock& fb);
std::vector<double> per_param_2744(const FeatureBlock& fb, int n);

ParamTriple scalar_params(const RgbImage& img);

/// Throws DimensionMismatch unless every vector has its layout length.
void check_feature_block(const FeatureBlock& fb);

}  // namespace imgrank
