#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "imgrank/manifest.hpp"
#include "imgrank/raster.hpp"

namespace imgrank {

// Procedural test scenes: a graded background around a theme hue with
// shapes, stripes and fine texture. Vivid scenes are saturated, bright and
// contrasty; dull scenes are the same scene pushed dim, grey and flat.

struct SceneOptions {
  int width = 256;
  int height = 192;
};

RgbImage synth_vivid_scene(std::uint64_t seed, double theme_hue, const SceneOptions& options = {});
RgbImage synth_dull_scene(std::uint64_t seed, double theme_hue, const SceneOptions& options = {});

/// Theme hue for the i-th image of a corpus (cycles through six themes).
double theme_hue(std::size_t i);

struct SampleCorpusOptions {
  std::size_t high_count = 24;
  std::size_t low_count = 6;
  std::uint64_t seed = 7;
  SceneOptions scene;
};

/// Writes high_NN.png / low_NN.png and manifest.jsonl into `dir` and returns
/// the manifest entries.
std::vector<ManifestEntry> write_sample_corpus(const std::filesystem::path& dir,
                                               const SampleCorpusOptions& options = {});

}  // namespace imgrank
