#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace imgrank {

enum class Quality { High, Low };

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  Quality quality = Quality::High;
  std::optional<std::int64_t> id;
};

struct EvalGroup {
  std::filesystem::path original;
  std::vector<std::filesystem::path> enhanced;
  std::vector<std::filesystem::path> degraded;
};

// JSON-lines readers. Blank lines are skipped; relative paths are resolved
// against `base_dir`. Malformed lines throw UnsupportedFormat with the line
// number.
std::vector<ManifestEntry> parse_corpus_manifest(const std::string& text, const std::filesystem::path& base_dir);
std::vector<ManifestEntry> load_corpus_manifest(const std::filesystem::path& path);
std::string format_corpus_manifest(const std::vector<ManifestEntry>& entries);

std::vector<EvalGroup> parse_eval_manifest(const std::string& text, const std::filesystem::path& base_dir);
std::vector<EvalGroup> load_eval_manifest(const std::filesystem::path& path);
std::string format_eval_manifest(const std::vector<EvalGroup>& groups);

std::vector<ManifestEntry> select_quality(const std::vector<ManifestEntry>& entries, Quality quality);

}  // namespace imgrank
