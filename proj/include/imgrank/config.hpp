#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgrank/degrade.hpp"
#include "imgrank/enhance.hpp"
#include "imgrank/hue_bins.hpp"
#include "imgrank/ranking.hpp"

namespace imgrank {

/// Pipeline settings. Precedence, lowest first: defaults, config file,
/// IMGRANK_<KEY> environment variables, command-line flags.
struct Config {
  int canonical_size = 512;
  double hue_threshold = 7.0;
  int hue_step = 1;
  double sv_step = 0.1;
  std::size_t hue_bin_count = 26;
  std::size_t k_retrieve = 100;
  std::size_t pairs_per_query = 25;
  double c_tradeoff = 1.0;
  std::uint32_t epochs = 20;
  std::size_t n_target_candidates = 200;
  double jitter_sigma = 0.02;
  double dedupe_radius = 0.005;
  double clamp_bs = 0.20;
  double clamp_c = 0.04;
  std::size_t min_candidates = 150;
  std::size_t max_candidates = 250;
  DegradationTable degradation = default_degradation_table();
  std::uint64_t seed = 0;
  unsigned jobs = 0;  // 0 = available parallelism

  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  void validate() const;

  unsigned worker_count() const;
  HueSweepOptions hue_sweep() const;
  SamplingOptions sampling() const;
  PairBuildOptions pair_options() const;
  TrainOptions train_options() const;
  EnhanceOptions enhance_options() const;
};

struct ConfigKey {
  std::string name;
  std::string description;
};

const std::vector<ConfigKey>& config_keys();

/// key = value lines; '#' starts a comment; values may be double-quoted;
/// [section] headers are ignored. Unknown keys are errors.
void apply_config_text(Config& config, const std::string& text);
Config load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Applies IMGRANK_<UPPERCASE_KEY> overrides.
void apply_env(Config& config, const EnvLookup& lookup);
void apply_process_env(Config& config);

std::string format_degradation(const DegradationTable& table);
DegradationTable parse_degradation(std::string_view text);

}  // namespace imgrank
