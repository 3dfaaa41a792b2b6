#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace imgrank {

/// Circular partition of the hue wheel. Bin i covers [boundaries[i],
/// boundaries[i+1]); the last bin wraps through 360 to boundaries[0].
class HueBinTable {
 public:
  HueBinTable() = default;
  explicit HueBinTable(std::vector<double> boundaries);

  const std::vector<double>& boundaries() const noexcept { return boundaries_; }
  std::size_t bin_count() const noexcept { return boundaries_.size(); }

  /// Bin index of a hue in degrees (any value; reduced modulo 360).
  std::size_t bin_of(double hue) const;

  /// Angular width of each bin, in bin order.
  std::vector<double> separations() const;

  /// Same boundaries within `tolerance` degrees.
  bool matches(const HueBinTable& other, double tolerance = 1e-4) const;

  friend bool operator==(const HueBinTable&, const HueBinTable&) = default;

 private:
  std::vector<double> boundaries_;
};

struct HueSweepOptions {
  double threshold = 7.0;  // CIEDE2000 units
  int hue_step = 1;        // degrees
  double sv_step = 0.1;    // grid spacing over saturation and value
  // Number of bins the table is fitted to; 0 keeps the raw sweep result.
  std::size_t target_bins = 26;
};

/// Largest CIEDE2000 distance between corresponding points of the S x V
/// grids of two hues.
double hue_grid_distance(double hue_m, double hue_n, double sv_step = 0.1);

/// Boundaries found by the greedy sweep, including 0 and before any wrap or
/// fitting. The sweep holds an anchor hue fixed and advances the candidate by
/// hue_step until the grid distance exceeds the threshold.
std::vector<double> sweep_hue_boundaries(const HueSweepOptions& options);

/// Sweep, circular wrap of the unterminated tail, then greedy merging of the
/// narrowest neighbouring bins down to options.target_bins.
HueBinTable derive_hue_bins(const HueSweepOptions& options = {});

// Text form: a header line then one boundary per line.
std::string format_hue_bins(const HueBinTable& table);
HueBinTable parse_hue_bins(const std::string& text);
void save_hue_bins(const HueBinTable& table, const std::filesystem::path& path);
HueBinTable load_hue_bins(const std::filesystem::path& path);

}  // namespace imgrank
