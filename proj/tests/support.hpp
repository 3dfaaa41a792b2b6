// Test helpers and independent reference implementations.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "imgrank/features.hpp"
#include "imgrank/hue_bins.hpp"
#include "imgrank/raster.hpp"
#include "imgrank/retrieval.hpp"

namespace support {

struct LabPair {
  imgrank::LabColor a;
  imgrank::LabColor b;
  double expected = 0.0;
};

// Published CIEDE2000 test pairs from tests/data.
std::vector<LabPair> ciede2000_pairs();

// sRGB to Lab via a matrix built from the primaries' chromaticities.
imgrank::LabColor lab_reference(const imgrank::Rgb& rgb);

// Sharpness counts from a direct O(N^2) DFT of each 3x3 cell.
std::vector<double> naive_sharpness(const imgrank::RgbImage& img);

imgrank::RgbImage noise_image(std::uint64_t seed, int width, int height, bool gray = false);

// Two flat colours split down the middle.
imgrank::RgbImage split_image(int width, int height, imgrank::Rgb left, imgrank::Rgb right);

const imgrank::HueBinTable& default_bins();

// Index of `count` vivid synthetic scenes, built once per process.
const imgrank::CorpusIndex& vivid_index(std::size_t count = 30);

imgrank::FeatureBlock random_feature_block(std::uint64_t seed);

class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);

}  // namespace support
