#pragma once

#include <array>
#include <vector>

#include "imgrank/raster.hpp"

namespace imgrank {

/// Multiplicative gains on brightness (HSV value), saturation and contrast
/// about the global RGB mean. (1, 1, 1) is the identity.
struct GainSpec {
  double brightness = 1.0;
  double saturation = 1.0;
  double contrast = 1.0;

  friend bool operator==(const GainSpec&, const GainSpec&) = default;
};

inline constexpr std::size_t kDegradedCount = 8;
using DegradationTable = std::array<GainSpec, kDegradedCount>;

/// Brightness low/high, saturation low/high, contrast low/high, all-low,
/// all-high.
const DegradationTable& default_degradation_table();

/// Per-channel stretch sending the 1st percentile to 0 and the 99th to 1.
RgbImage auto_enhance(const RgbImage& img);

/// Contrast about the global mean, then saturation, then brightness; each
/// step clamps to [0, 1].
RgbImage apply_gains(const RgbImage& img, const GainSpec& gains);

std::vector<RgbImage> degraded_versions(const RgbImage& img,
                                        const DegradationTable& table = default_degradation_table());

/// Linearly interpolated percentile (p in [0, 100]) of a sample.
double percentile(std::vector<double> values, double p);

}  // namespace imgrank
