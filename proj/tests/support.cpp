#include "support.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unistd.h>
#include <stdexcept>

#include "imgrank/random.hpp"
#include "imgrank/synth.hpp"

namespace support {

using namespace imgrank;

std::vector<LabPair> ciede2000_pairs() {
  std::ifstream in(std::string(IMGRANK_TEST_DATA) + "/ciede2000_pairs.txt");
  if (!in) throw std::runtime_error("missing ciede2000_pairs.txt");
  std::vector<LabPair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    LabPair p;
    row >> p.a.L >> p.a.a >> p.a.b >> p.b.L >> p.b.a >> p.b.b >> p.expected;
    pairs.push_back(p);
  }
  return pairs;
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Vec3 xy_to_xyz(double x, double y) { return {x / y, 1.0, (1.0 - x - y) / y}; }

Mat3 inverse(const Mat3& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  Mat3 inv{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[r][c] = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / det;
    }
  }
  return inv;
}

Vec3 mul(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int r = 0; r < 3; ++r) out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2];
  return out;
}

double decode(double u) { return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4); }

double lab_f(double t) {
  constexpr double d = 6.0 / 29.0;
  return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

}  // namespace

LabColor lab_reference(const Rgb& rgb) {
  const Vec3 r = xy_to_xyz(0.64, 0.33), g = xy_to_xyz(0.30, 0.60), b = xy_to_xyz(0.15, 0.06);
  const Vec3 white = xy_to_xyz(0.3127, 0.3290);
  const Mat3 primaries{{{r[0], g[0], b[0]}, {r[1], g[1], b[1]}, {r[2], g[2], b[2]}}};
  const Vec3 scale = mul(inverse(primaries), white);
  Mat3 m{};
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) m[row][col] = primaries[row][col] * scale[col];
  }
  const Vec3 xyz = mul(m, {decode(rgb.r), decode(rgb.g), decode(rgb.b)});
  const double fx = lab_f(xyz[0] / white[0]), fy = lab_f(xyz[1] / white[1]), fz = lab_f(xyz[2] / white[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<double> naive_sharpness(const RgbImage& img) {
  const int w = img.width(), h = img.height();
  std::vector<double> out(144, 0.0);
  for (int gy = 0; gy < 3; ++gy) {
    const int y0 = gy * h / 3, y1 = (gy + 1) * h / 3;
    for (int gx = 0; gx < 3; ++gx) {
      const int x0 = gx * w / 3, x1 = (gx + 1) * w / 3;
      const int cw = x1 - x0, ch = y1 - y0;
      std::vector<double> mags;
      for (int v = 0; v < ch; ++v) {
        for (int u = 0; u < cw; ++u) {
          if (u == 0 && v == 0) continue;
          std::complex<double> acc = 0.0;
          for (int y = 0; y < ch; ++y) {
            for (int x = 0; x < cw; ++x) {
              const double lum = 0.299 * img.at(x0 + x, y0 + y, 0) + 0.587 * img.at(x0 + x, y0 + y, 1) +
                                 0.114 * img.at(x0 + x, y0 + y, 2);
              const double phase =
                  -2.0 * std::numbers::pi * (static_cast<double>(u * x) / cw + static_cast<double>(v * y) / ch);
              acc += lum * std::polar(1.0, phase);
            }
          }
          mags.push_back(std::abs(acc));
        }
      }
      double peak = 0.0;
      for (double m : mags) peak = std::max(peak, m);
      if (peak <= 0.0) continue;
      for (int i = 0; i < 16; ++i) {
        const double theta = std::pow(10.0, -3.0 + 3.0 * i / 15.0);
        int count = 0;
        for (double m : mags) count += m / peak > theta ? 1 : 0;
        out[(gy * 3 + gx) * 16 + i] = static_cast<double>(count) / (cw * ch);
      }
    }
  }
  return out;
}

RgbImage noise_image(std::uint64_t seed, int width, int height, bool gray) {
  Rng rng(seed);
  RgbImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = rng.uniform();
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = gray ? v : (c == 0 ? v : rng.uniform());
    }
  }
  return img;
}

RgbImage split_image(int width, int height, Rgb left, Rgb right) {
  RgbImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Rgb& c = x < width / 2 ? left : right;
      img.at(x, y, 0) = c.r;
      img.at(x, y, 1) = c.g;
      img.at(x, y, 2) = c.b;
    }
  }
  return img;
}

const HueBinTable& default_bins() {
  static const HueBinTable bins = derive_hue_bins();
  return bins;
}

const CorpusIndex& vivid_index(std::size_t count) {
  static std::mutex mutex;
  static std::map<std::size_t, CorpusIndex> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(count);
  if (it != cache.end()) return it->second;
  CorpusIndex index;
  index.hue_bins = default_bins();
  for (std::size_t i = 0; i < count; ++i) {
    const RgbImage img = synth_vivid_scene(1000 + i, theme_hue(i));
    index.entries.push_back(
        make_index_entry(static_cast<std::int64_t>(i), "vivid_" + std::to_string(i), img, index.hue_bins));
  }
  return cache.emplace(count, std::move(index)).first->second;
}

FeatureBlock random_feature_block(std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform();
    return v;
  };
  FeatureBlock fb;
  fb.visual = fill(kVisualDim);
  fb.p_contrast = fill(kParamDim);
  fb.p_brightness = fill(kParamDim);
  fb.p_saturation = fill(kParamDim);
  fb.p_sharpness = fill(kParamDim);
  return fb;
}

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("imgrank_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace support
