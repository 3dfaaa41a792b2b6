#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgrank/features.hpp"
#include "imgrank/hue_bins.hpp"
#include "imgrank/manifest.hpp"
#include "imgrank/raster.hpp"

namespace imgrank {

inline constexpr std::size_t kOpponentBins = 64;
inline constexpr std::size_t kOrientationBins = 8;
inline constexpr std::size_t kGradientBins = kOrientationBins * 5;  // level 0 + 2x2 level 1
inline constexpr std::size_t kDescriptorDim = kOpponentBins + kGradientBins;
inline constexpr std::uint32_t kIndexFormatVersion = 1;
inline constexpr std::size_t kDefaultRetrieveCount = 100;

/// 4x4x4 opponent-colour histogram followed by a two-level gradient
/// orientation pyramid. Each part (and each pyramid level) is L1-normalized.
std::vector<double> build_descriptor(const RgbImage& img);

/// L1 over the opponent part plus L1 over the gradient part.
double descriptor_distance(std::span<const double> a, std::span<const double> b);

struct IndexEntry {
  std::int64_t id = 0;
  std::string path;
  std::vector<double> descriptor;
  FeatureBlock features;
  ParamTriple params;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct CorpusIndex {
  std::vector<IndexEntry> entries;
  HueBinTable hue_bins;
  std::uint32_t format_version = kIndexFormatVersion;

  friend bool operator==(const CorpusIndex&, const CorpusIndex&) = default;
};

/// Computes descriptor (of the auto-enhanced image), features and scalar
/// parameters. Values are rounded to float32 so an entry is unchanged by a
/// save/load cycle.
IndexEntry make_index_entry(std::int64_t id, std::string path, const RgbImage& img, const HueBinTable& bins,
                            int canonical_size = kDefaultCanonicalSize);

struct IndexBuildOptions {
  int canonical_size = kDefaultCanonicalSize;
  unsigned jobs = 1;
};

struct IndexBuildResult {
  CorpusIndex index;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Indexes the high-quality manifest entries. Unreadable images are skipped
/// with a warning; an index with no entries is an error. Entries without an
/// explicit id get their manifest line position.
IndexBuildResult build_index(const std::vector<ManifestEntry>& manifest, const HueBinTable& bins,
                             const IndexBuildOptions& options = {});

std::string serialize_index(const CorpusIndex& index);
CorpusIndex deserialize_index(std::string_view bytes);
void save_index(const CorpusIndex& index, const std::filesystem::path& path);
CorpusIndex load_index(const std::filesystem::path& path);

struct RetrievalHit {
  std::size_t entry = 0;  // position in CorpusIndex::entries
  double distance = 0.0;
};

struct RetrievalResult {
  std::vector<RetrievalHit> hits;
  std::vector<std::string> warnings;
};

/// Nearest entries by descriptor distance, ties broken by ascending id.
RetrievalResult retrieve_by_descriptor(const CorpusIndex& index, std::span<const double> descriptor, std::size_t k);

/// Auto-enhances the query, describes it and ranks the index.
RetrievalResult retrieve(const CorpusIndex& index, const RgbImage& query, std::size_t k = kDefaultRetrieveCount);

}  // namespace imgrank
