#include "imgrank/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "imgrank/binary_io.hpp"
#include "imgrank/error.hpp"
#include "imgrank/parallel.hpp"

namespace imgrank {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::InvalidArgument, "config",
              "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is available in libstdc++ 11.
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) bad_value(key, value);
  } else {
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  }
  return out;
}

template <class T>
std::string show(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    std::ostringstream out;
    out << v;
    return out.str();
  } else {
    return std::to_string(v);
  }
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      {"canonical_size", "longer image side used for feature extraction, pixels"},
      {"hue_threshold", "CIEDE2000 distance that closes a hue bin"},
      {"hue_step", "hue sweep step, degrees"},
      {"sv_step", "saturation/value grid spacing of the hue sweep"},
      {"hue_bin_count", "hue bins kept after fitting the sweep"},
      {"k_retrieve", "neighbours retrieved per query"},
      {"pairs_per_query", "retrieved neighbours turned into training pairs"},
      {"c_tradeoff", "hinge-loss weight of the ranking objective"},
      {"epochs", "training passes over the pair set"},
      {"n_target_candidates", "parameter targets drawn before dedupe"},
      {"jitter_sigma", "Gaussian jitter on sampled targets"},
      {"dedupe_radius", "L-infinity radius under which targets are merged"},
      {"clamp_bs", "relative steering limit for saturation and brightness"},
      {"clamp_c", "relative steering limit for contrast"},
      {"min_candidates", "fewest enhancement candidates"},
      {"max_candidates", "most enhancement candidates"},
      {"degradation_gains", "8 brightness:saturation:contrast gain triples"},
      {"seed", "random seed"},
      {"jobs", "worker threads, 0 = available parallelism"},
  };
  return keys;
}

void Config::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  if (key == "canonical_size") canonical_size = parse_number<int>(key, value);
  else if (key == "hue_threshold") hue_threshold = parse_number<double>(key, value);
  else if (key == "hue_step") hue_step = parse_number<int>(key, value);
  else if (key == "sv_step") sv_step = parse_number<double>(key, value);
  else if (key == "hue_bin_count") hue_bin_count = parse_number<std::size_t>(key, value);
  else if (key == "k_retrieve") k_retrieve = parse_number<std::size_t>(key, value);
  else if (key == "pairs_per_query") pairs_per_query = parse_number<std::size_t>(key, value);
  else if (key == "c_tradeoff") c_tradeoff = parse_number<double>(key, value);
  else if (key == "epochs") epochs = parse_number<std::uint32_t>(key, value);
  else if (key == "n_target_candidates") n_target_candidates = parse_number<std::size_t>(key, value);
  else if (key == "jitter_sigma") jitter_sigma = parse_number<double>(key, value);
  else if (key == "dedupe_radius") dedupe_radius = parse_number<double>(key, value);
  else if (key == "clamp_bs") clamp_bs = parse_number<double>(key, value);
  else if (key == "clamp_c") clamp_c = parse_number<double>(key, value);
  else if (key == "min_candidates") min_candidates = parse_number<std::size_t>(key, value);
  else if (key == "max_candidates") max_candidates = parse_number<std::size_t>(key, value);
  else if (key == "degradation_gains") degradation = parse_degradation(value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "jobs") jobs = parse_number<unsigned>(key, value);
  else throw Error(ErrorKind::InvalidArgument, "config", "unknown key '" + std::string(key) + "'");
}

std::string Config::get(std::string_view key) const {
  if (key == "canonical_size") return show(canonical_size);
  if (key == "hue_threshold") return show(hue_threshold);
  if (key == "hue_step") return show(hue_step);
  if (key == "sv_step") return show(sv_step);
  if (key == "hue_bin_count") return show(hue_bin_count);
  if (key == "k_retrieve") return show(k_retrieve);
  if (key == "pairs_per_query") return show(pairs_per_query);
  if (key == "c_tradeoff") return show(c_tradeoff);
  if (key == "epochs") return show(epochs);
  if (key == "n_target_candidates") return show(n_target_candidates);
  if (key == "jitter_sigma") return show(jitter_sigma);
  if (key == "dedupe_radius") return show(dedupe_radius);
  if (key == "clamp_bs") return show(clamp_bs);
  if (key == "clamp_c") return show(clamp_c);
  if (key == "min_candidates") return show(min_candidates);
  if (key == "max_candidates") return show(max_candidates);
  if (key == "degradation_gains") return format_degradation(degradation);
  if (key == "seed") return show(seed);
  if (key == "jobs") return show(jobs);
  throw Error(ErrorKind::InvalidArgument, "config", "unknown key '" + std::string(key) + "'");
}

void Config::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, "config", what);
  };
  require(canonical_size >= 96, "canonical_size must be at least 96");
  require(hue_threshold > 0.0, "hue_threshold must be positive");
  require(hue_step > 0 && 360 % hue_step == 0, "hue_step must be a positive divisor of 360");
  require(sv_step > 0.0 && sv_step <= 1.0, "sv_step must lie in (0, 1]");
  require(hue_bin_count > 0, "hue_bin_count must be positive");
  require(k_retrieve > 0, "k_retrieve must be positive");
  require(pairs_per_query > 0, "pairs_per_query must be positive");
  require(c_tradeoff > 0.0, "c_tradeoff must be positive");
  require(epochs > 0, "epochs must be positive");
  require(n_target_candidates > 0, "n_target_candidates must be positive");
  require(jitter_sigma > 0.0, "jitter_sigma must be positive");
  require(dedupe_radius > 0.0, "dedupe_radius must be positive");
  require(clamp_bs > 0.0 && clamp_bs < 1.0, "clamp_bs must lie in (0, 1)");
  require(clamp_c > 0.0 && clamp_c < 1.0, "clamp_c must lie in (0, 1)");
  require(min_candidates > 0 && min_candidates <= max_candidates, "need 0 < min_candidates <= max_candidates");
  for (const auto& g : degradation) {
    require(g.brightness > 0.0 && g.saturation > 0.0 && g.contrast > 0.0, "degradation gains must be positive");
  }
}

unsigned Config::worker_count() const { return jobs == 0 ? default_jobs() : jobs; }

HueSweepOptions Config::hue_sweep() const { return HueSweepOptions{hue_threshold, hue_step, sv_step, hue_bin_count}; }

SamplingOptions Config::sampling() const {
  return SamplingOptions{n_target_candidates, jitter_sigma, dedupe_radius, clamp_bs, clamp_c, min_candidates,
                         max_candidates};
}

PairBuildOptions Config::pair_options() const {
  return PairBuildOptions{k_retrieve, pairs_per_query, degradation, canonical_size, worker_count()};
}

TrainOptions Config::train_options() const { return TrainOptions{c_tradeoff, epochs, seed}; }

EnhanceOptions Config::enhance_options() const {
  return EnhanceOptions{k_retrieve, sampling(), canonical_size, worker_count()};
}

void apply_config_text(Config& config, const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument, "config", "line " + std::to_string(line_no) + ": expected key = value");
    }
    config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

Config load_config(const std::filesystem::path& path) {
  Config config;
  apply_config_text(config, read_file(path, "config"));
  return config;
}

void apply_env(Config& config, const EnvLookup& lookup) {
  for (const auto& key : config_keys()) {
    std::string var = "IMGRANK_" + key.name;
    std::transform(var.begin(), var.end(), var.begin(), [](unsigned char c) { return std::toupper(c); });
    if (auto value = lookup(var)) config.set(key.name, *value);
  }
}

void apply_process_env(Config& config) {
  apply_env(config, [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  });
}

std::string format_degradation(const DegradationTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) out << ',';
    out << table[i].brightness << ':' << table[i].saturation << ':' << table[i].contrast;
  }
  return out.str();
}

DegradationTable parse_degradation(std::string_view text) {
  DegradationTable table{};
  std::size_t count = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find_first_of(",;", start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) {
      if (count == table.size()) bad_value("degradation_gains", text);
      const auto c1 = item.find(':');
      const auto c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
      if (c2 == std::string_view::npos) bad_value("degradation_gains", text);
      table[count].brightness = parse_number<double>("degradation_gains", item.substr(0, c1));
      table[count].saturation = parse_number<double>("degradation_gains", item.substr(c1 + 1, c2 - c1 - 1));
      table[count].contrast = parse_number<double>("degradation_gains", item.substr(c2 + 1));
      ++count;
    }
    start = end + 1;
  }
  if (count != table.size()) bad_value("degradation_gains", text);
  return table;
}

}  // namespace imgrank
