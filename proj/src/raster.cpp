#include "imgrank/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "imgrank/error.hpp"

namespace imgrank {

template <class Tag>
Image3<Tag>::Image3(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::InvalidArgument, "raster", "image dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height * 3, 0.0);
}

template class Image3<RgbTag>;
template class Image3<HsvTag>;

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

enum class Codec { Png, Jpeg, Unknown };

Codec sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = in.gcount();
  static constexpr std::array<unsigned char, 8> png{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (got == 8 && head == png) return Codec::Png;
  if (got >= 3 && head[0] == 0xff && head[1] == 0xd8 && head[2] == 0xff) return Codec::Jpeg;
  return Codec::Unknown;
}

Codec codec_for_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return Codec::Png;
  if (ext == ".jpg" || ext == ".jpeg") return Codec::Jpeg;
  return Codec::Unknown;
}

cv::Mat to_mat(const RgbImage& img) {
  // OpenCV wants BGR; copy into a CV_64FC3 matrix.
  cv::Mat m(img.height(), img.width(), CV_64FC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<cv::Vec3d>(y);
    for (int x = 0; x < img.width(); ++x) {
      row[x] = cv::Vec3d(img.at(x, y, 2), img.at(x, y, 1), img.at(x, y, 0));
    }
  }
  return m;
}

RgbImage from_mat(const cv::Mat& m) {
  RgbImage img(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<cv::Vec3d>(y);
    for (int x = 0; x < m.cols; ++x) {
      img.at(x, y, 0) = std::clamp(row[x][2], 0.0, 1.0);
      img.at(x, y, 1) = std::clamp(row[x][1], 0.0, 1.0);
      img.at(x, y, 2) = std::clamp(row[x][0], 0.0, 1.0);
    }
  }
  return img;
}

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

RgbImage load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::MissingFile, "raster", "no such file: " + path.string());
  }
  if (sniff(path) == Codec::Unknown) {
    throw Error(ErrorKind::UnsupportedFormat, "raster", "not a PNG or JPEG file: " + path.string());
  }
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (raw.empty()) {
    throw Error(ErrorKind::UnsupportedFormat, "raster", "corrupt image data: " + path.string());
  }
  RgbImage img(raw.cols, raw.rows);
  for (int y = 0; y < raw.rows; ++y) {
    const auto* row = raw.ptr<cv::Vec3b>(y);
    for (int x = 0; x < raw.cols; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[x][2 - c] / 255.0;
    }
  }
  return img;
}

void save_image(const RgbImage& img, const std::filesystem::path& path, int jpeg_quality) {
  if (img.empty()) {
    throw Error(ErrorKind::InvalidArgument, "raster", "cannot save an empty image");
  }
  const Codec codec = codec_for_extension(path);
  if (codec == Codec::Unknown) {
    throw Error(ErrorKind::UnsupportedFormat, "raster",
                "output extension must be .png, .jpg or .jpeg: " + path.string());
  }
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(img.at(x, y, 2 - c), 0.0, 1.0);
        row[x][c] = static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
  }
  std::vector<int> params;
  if (codec == Codec::Jpeg) params = {cv::IMWRITE_JPEG_QUALITY, jpeg_quality};
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr, params);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::Io, "raster", "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) {
    throw Error(ErrorKind::Io, "raster", "cannot write " + path.string());
  }
}

Hsv rgb_to_hsv(const Rgb& rgb) {
  const double mx = std::max({rgb.r, rgb.g, rgb.b});
  const double mn = std::min({rgb.r, rgb.g, rgb.b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) {
    out.h = 0.0;
    return out;
  }
  double h;
  if (mx == rgb.r) {
    h = 60.0 * std::fmod((rgb.g - rgb.b) / delta, 6.0);
  } else if (mx == rgb.g) {
    h = 60.0 * ((rgb.b - rgb.r) / delta + 2.0);
  } else {
    h = 60.0 * ((rgb.r - rgb.g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) {
  const double v = hsv.v;
  const double s = hsv.s;
  if (s <= 0.0) return {v, v, v};
  double h = std::fmod(hsv.h, 360.0);
  if (h < 0.0) h += 360.0;
  const double sector = h / 60.0;
  const int i = std::min(5, static_cast<int>(sector));
  const double f = sector - i;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (i) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

HsvImage rgb_to_hsv(const RgbImage& img) {
  HsvImage out(img.width(), img.height());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    const Hsv hsv = rgb_to_hsv(Rgb{src[i], src[i + 1], src[i + 2]});
    dst[i] = hsv.h;
    dst[i + 1] = hsv.s;
    dst[i + 2] = hsv.v;
  }
  return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
  RgbImage out(img.width(), img.height());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    const Rgb rgb = hsv_to_rgb(Hsv{src[i], src[i + 1], src[i + 2]});
    dst[i] = rgb.r;
    dst[i + 1] = rgb.g;
    dst[i + 2] = rgb.b;
  }
  return out;
}

LabColor rgb_to_lab(const Rgb& rgb) {
  const double r = srgb_to_linear(rgb.r);
  const double g = srgb_to_linear(rgb.g);
  const double b = srgb_to_linear(rgb.b);
  // sRGB primaries, D65. The reference white is taken as the row sums so that
  // every gray maps to a = b = 0 exactly.
  constexpr double m[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                              {0.2126729, 0.7151522, 0.0721750},
                              {0.0193339, 0.1191920, 0.9503041}};
  constexpr double xn = m[0][0] + m[0][1] + m[0][2];
  constexpr double yn = m[1][0] + m[1][1] + m[1][2];
  constexpr double zn = m[2][0] + m[2][1] + m[2][2];
  const double x = m[0][0] * r + m[0][1] * g + m[0][2] * b;
  const double y = m[1][0] * r + m[1][1] * g + m[1][2] * b;
  const double z = m[2][0] * r + m[2][1] * g + m[2][2] * b;
  const double fx = lab_f(x / xn);
  const double fy = lab_f(y / yn);
  const double fz = lab_f(z / zn);
  LabColor out{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
  return out;
}

double delta_e_2000(const LabColor& c1, const LabColor& c2) {
  const double c1ab = std::hypot(c1.a, c1.b);
  const double c2ab = std::hypot(c2.a, c2.b);
  const double cbar = 0.5 * (c1ab + c2ab);
  const double cbar7 = std::pow(cbar, 7.0);
  const double g = 0.5 * (1.0 - std::sqrt(cbar7 / (cbar7 + std::pow(25.0, 7.0))));
  const double a1p = (1.0 + g) * c1.a;
  const double a2p = (1.0 + g) * c2.a;
  const double c1p = std::hypot(a1p, c1.b);
  const double c2p = std::hypot(a2p, c2.b);

  auto hue_angle = [](double b, double ap) {
    if (b == 0.0 && ap == 0.0) return 0.0;
    double h = std::atan2(b, ap) * kDegPerRad;
    return h < 0.0 ? h + 360.0 : h;
  };
  const double h1p = hue_angle(c1.b, a1p);
  const double h2p = hue_angle(c2.b, a2p);

  const double dlp = c2.L - c1.L;
  const double dcp = c2p - c1p;
  double dhp = 0.0;
  if (c1p * c2p != 0.0) {
    dhp = h2p - h1p;
    if (dhp > 180.0) {
      dhp -= 360.0;
    } else if (dhp < -180.0) {
      dhp += 360.0;
    }
  }
  const double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(0.5 * dhp / kDegPerRad);

  const double lbarp = 0.5 * (c1.L + c2.L);
  const double cbarp = 0.5 * (c1p + c2p);
  double hbarp = h1p + h2p;
  if (c1p * c2p != 0.0) {
    if (std::abs(h1p - h2p) <= 180.0) {
      hbarp *= 0.5;
    } else if (h1p + h2p < 360.0) {
      hbarp = 0.5 * (hbarp + 360.0);
    } else {
      hbarp = 0.5 * (hbarp - 360.0);
    }
  }

  auto rad = [](double deg) { return deg / kDegPerRad; };
  const double t = 1.0 - 0.17 * std::cos(rad(hbarp - 30.0)) + 0.24 * std::cos(rad(2.0 * hbarp)) +
                   0.32 * std::cos(rad(3.0 * hbarp + 6.0)) - 0.20 * std::cos(rad(4.0 * hbarp - 63.0));
  const double dtheta = 30.0 * std::exp(-std::pow((hbarp - 275.0) / 25.0, 2.0));
  const double cbarp7 = std::pow(cbarp, 7.0);
  const double rc = 2.0 * std::sqrt(cbarp7 / (cbarp7 + std::pow(25.0, 7.0)));
  const double lterm = (lbarp - 50.0) * (lbarp - 50.0);
  const double sl = 1.0 + 0.015 * lterm / std::sqrt(20.0 + lterm);
  const double sc = 1.0 + 0.045 * cbarp;
  const double sh = 1.0 + 0.015 * cbarp * t;
  const double rt = -std::sin(rad(2.0 * dtheta)) * rc;

  const double tl = dlp / sl;
  const double tc = dcp / sc;
  const double th = dHp / sh;
  return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

std::vector<double> grayscale(const RgbImage& img) {
  std::vector<double> gray(img.pixel_count());
  auto src = img.data();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
  }
  return gray;
}

RgbImage make_constant_image(int width, int height, Rgb color) {
  RgbImage img(width, height);
  auto px = img.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    px[i] = color.r;
    px[i + 1] = color.g;
    px[i + 2] = color.b;
  }
  return img;
}

RgbImage resize_image(const RgbImage& img, int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::InvalidArgument, "raster", "resize target must be positive");
  }
  if (width == img.width() && height == img.height()) return img;
  const bool shrinking = width <= img.width() && height <= img.height();
  cv::Mat out;
  cv::resize(to_mat(img), out, cv::Size(width, height), 0, 0,
             shrinking ? cv::INTER_AREA : cv::INTER_LINEAR);
  return from_mat(out);
}

}  // namespace imgrank
