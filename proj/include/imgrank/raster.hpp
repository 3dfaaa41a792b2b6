#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace imgrank {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

// h in degrees [0, 360), s and v in [0, 1].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

// CIELAB under D65.
struct LabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Interleaved three-channel raster of doubles, row-major. The tag keeps RGB
/// and HSV rasters from being mixed up at call sites.
template <class Tag>
class Image3 {
 public:
  Image3() = default;
  Image3(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int x, int y, int c) { return data_[index(x, y) + c]; }
  double at(int x, int y, int c) const { return data_[index(x, y) + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Image3&, const Image3&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

struct RgbTag {};
struct HsvTag {};

/// Channels in [0, 1].
using RgbImage = Image3<RgbTag>;
/// Channel 0 is hue in degrees, channels 1 and 2 are saturation and value.
using HsvImage = Image3<HsvTag>;

extern template class Image3<RgbTag>;
extern template class Image3<HsvTag>;

/// Decodes a PNG or JPEG file. Throws MissingFile when the path does not
/// exist and UnsupportedFormat when the bytes are not a decodable PNG/JPEG.
RgbImage load_image(const std::filesystem::path& path);

/// Writes 8-bit PNG or JPEG, chosen by extension.
void save_image(const RgbImage& img, const std::filesystem::path& path, int jpeg_quality = 95);

Hsv rgb_to_hsv(const Rgb& rgb);
Rgb hsv_to_rgb(const Hsv& hsv);
HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);

LabColor rgb_to_lab(const Rgb& rgb);
double delta_e_2000(const LabColor& c1, const LabColor& c2);

/// Luma 0.299 r + 0.587 g + 0.114 b, one value per pixel.
std::vector<double> grayscale(const RgbImage& img);

RgbImage make_constant_image(int width, int height, Rgb color);

/// Resampled copy; area averaging when shrinking, bilinear otherwise.
RgbImage resize_image(const RgbImage& img, int width, int height);

}  // namespace imgrank
