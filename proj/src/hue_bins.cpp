#include "imgrank/hue_bins.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "imgrank/error.hpp"
#include "imgrank/raster.hpp"

namespace imgrank {

namespace {

double wrap_degrees(double hue) {
  double h = std::fmod(hue, 360.0);
  if (h < 0.0) h += 360.0;
  return h;
}

double forward_span(double from, double to) {
  const double span = wrap_degrees(to - from);
  return span == 0.0 ? 360.0 : span;
}

std::vector<LabColor> hue_grid(double hue, double sv_step) {
  const int steps = static_cast<int>(std::lround(1.0 / sv_step));
  std::vector<LabColor> grid;
  grid.reserve(static_cast<std::size_t>(steps + 1) * (steps + 1));
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double s = std::min(1.0, i * sv_step);
      const double v = std::min(1.0, j * sv_step);
      grid.push_back(rgb_to_lab(hsv_to_rgb(Hsv{wrap_degrees(hue), s, v})));
    }
  }
  return grid;
}

double grid_distance(const std::vector<LabColor>& a, const std::vector<LabColor>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, delta_e_2000(a[i], b[i]));
  return worst;
}

void check_options(const HueSweepOptions& options) {
  if (!(options.threshold > 0.0) || !std::isfinite(options.threshold)) {
    throw Error(ErrorKind::InvalidArgument, "features", "hue threshold must be positive");
  }
  if (options.hue_step < 1 || 360 % options.hue_step != 0) {
    throw Error(ErrorKind::InvalidArgument, "features", "hue step must be a positive divisor of 360");
  }
  if (!(options.sv_step > 0.0 && options.sv_step <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "features", "saturation/value grid step must lie in (0, 1]");
  }
}

}  // namespace

HueBinTable::HueBinTable(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "features", "hue-bin table needs at least one boundary");
  }
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    const double b = boundaries_[i];
    if (!(b >= 0.0 && b < 360.0)) {
      throw Error(ErrorKind::InvalidArgument, "features", "hue boundary outside [0, 360)");
    }
    if (i > 0 && !(b > boundaries_[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "features", "hue boundaries must be strictly increasing");
    }
  }
}

std::size_t HueBinTable::bin_of(double hue) const {
  const double h = wrap_degrees(hue);
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), h);
  if (it == boundaries_.begin()) return boundaries_.size() - 1;
  return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

std::vector<double> HueBinTable::separations() const {
  std::vector<double> out(boundaries_.size());
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    out[i] = forward_span(boundaries_[i], boundaries_[(i + 1) % boundaries_.size()]);
  }
  return out;
}

bool HueBinTable::matches(const HueBinTable& other, double tolerance) const {
  if (boundaries_.size() != other.boundaries_.size()) return false;
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (std::abs(boundaries_[i] - other.boundaries_[i]) > tolerance) return false;
  }
  return true;
}

double hue_grid_distance(double hue_m, double hue_n, double sv_step) {
  return grid_distance(hue_grid(hue_m, sv_step), hue_grid(hue_n, sv_step));
}

std::vector<double> sweep_hue_boundaries(const HueSweepOptions& options) {
  check_options(options);
  std::vector<double> boundaries{0.0};
  int anchor = 0;
  for (;;) {
    const auto anchor_grid = hue_grid(anchor, options.sv_step);
    int candidate = anchor + options.hue_step;
    while (candidate < 360 &&
           grid_distance(anchor_grid, hue_grid(candidate, options.sv_step)) <= options.threshold) {
      candidate += options.hue_step;
    }
    if (candidate >= 360) break;
    boundaries.push_back(candidate);
    anchor = candidate;
  }
  return boundaries;
}

HueBinTable derive_hue_bins(const HueSweepOptions& options) {
  std::vector<double> bounds = sweep_hue_boundaries(options);

  // The sweep stops at 360 without checking the tail [last, 360); unless that
  // tail is itself distinct it wraps onto the first bin.
  if (hue_grid_distance(bounds.back(), 360.0, options.sv_step) <= options.threshold) {
    bounds.erase(bounds.begin());
  }
  if (bounds.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "features",
                "hue threshold " + std::to_string(options.threshold) + " yields fewer than 2 hue bins");
  }
  if (options.target_bins == 0) return HueBinTable(std::move(bounds));
  if (bounds.size() < options.target_bins) {
    throw Error(ErrorKind::InvalidArgument, "features",
                "hue threshold " + std::to_string(options.threshold) + " yields " +
                    std::to_string(bounds.size()) + " hue bins, fewer than the " +
                    std::to_string(options.target_bins) + " the visual histogram needs");
  }

  // Drop the boundary whose removal creates the narrowest merged bin. Merges
  // that would leave neighbouring boundaries within the threshold go last.
  while (bounds.size() > options.target_bins) {
    const std::size_t n = bounds.size();
    std::tuple<bool, double, double, std::size_t> best{true, 1e300, 1e300, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const double prev = bounds[(i + n - 1) % n];
      const double next = bounds[(i + 1) % n];
      const double span = forward_span(prev, next);
      const double dist = hue_grid_distance(prev, prev + span, options.sv_step);
      const std::tuple<bool, double, double, std::size_t> key{dist <= options.threshold, span, dist, i};
      if (key < best) best = key;
    }
    bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(std::get<3>(best)));
  }
  return HueBinTable(std::move(bounds));
}

std::string format_hue_bins(const HueBinTable& table) {
  std::ostringstream out;
  out << "# imgrank hue bins v1\n";
  out.precision(17);
  for (double b : table.boundaries()) out << b << '\n';
  return out.str();
}

HueBinTable parse_hue_bins(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> bounds;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      std::size_t used = 0;
      bounds.push_back(std::stod(line.substr(first), &used));
    } catch (const std::exception&) {
      throw Error(ErrorKind::UnsupportedFormat, "features", "bad hue-bin line: " + line);
    }
  }
  return HueBinTable(std::move(bounds));
}

void save_hue_bins(const HueBinTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << format_hue_bins(table);
  if (!out) throw Error(ErrorKind::Io, "features", "cannot write " + path.string());
}

HueBinTable load_hue_bins(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "features", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hue_bins(buf.str());
}

}  // namespace imgrank
