#include "imgrank/manifest.hpp"

#include <sstream>

#include <json.hpp>

#include "imgrank/binary_io.hpp"
#include "imgrank/error.hpp"

namespace imgrank {

namespace {

using nlohmann::json;

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw Error(ErrorKind::UnsupportedFormat, "manifest", "line " + std::to_string(line_no) + ": " + why);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path.lexically_normal();
  return (base / path).lexically_normal();
}

template <class Fn>
void for_each_json_line(const std::string& text, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      bad_line(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) bad_line(line_no, "expected a JSON object");
    fn(obj, line_no);
  }
}

std::string path_string(const json& obj, const char* key, std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) bad_line(line_no, std::string("missing string field \"") + key + "\"");
  return it->get<std::string>();
}

std::vector<std::filesystem::path> path_list(const json& obj, const char* key, const std::filesystem::path& base,
                                             std::size_t line_no) {
  std::vector<std::filesystem::path> out;
  const auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) bad_line(line_no, std::string("field \"") + key + "\" must be an array");
  for (const auto& p : *it) {
    if (!p.is_string()) bad_line(line_no, std::string("field \"") + key + "\" must hold strings");
    out.push_back(resolve(base, p.get<std::string>()));
  }
  return out;
}

}  // namespace

std::vector<ManifestEntry> parse_corpus_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  for_each_json_line(text, [&](const json& obj, std::size_t line_no) {
    ManifestEntry entry;
    entry.path = resolve(base_dir, path_string(obj, "path", line_no));
    const auto q = obj.find("quality");
    if (q == obj.end() || !q->is_string()) bad_line(line_no, "missing string field \"quality\"");
    if (*q == "high") {
      entry.quality = Quality::High;
    } else if (*q == "low") {
      entry.quality = Quality::Low;
    } else {
      bad_line(line_no, "quality must be \"high\" or \"low\"");
    }
    if (const auto id = obj.find("id"); id != obj.end() && !id->is_null()) {
      if (!id->is_number_integer()) bad_line(line_no, "id must be an integer");
      entry.id = id->get<std::int64_t>();
    }
    entries.push_back(std::move(entry));
  });
  return entries;
}

std::vector<ManifestEntry> load_corpus_manifest(const std::filesystem::path& path) {
  return parse_corpus_manifest(read_file(path, "manifest"), path.parent_path());
}

std::string format_corpus_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    json obj{{"path", e.path.generic_string()}, {"quality", e.quality == Quality::High ? "high" : "low"}};
    if (e.id) obj["id"] = *e.id;
    out += obj.dump() + "\n";
  }
  return out;
}

std::vector<EvalGroup> parse_eval_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  std::vector<EvalGroup> groups;
  for_each_json_line(text, [&](const json& obj, std::size_t line_no) {
    EvalGroup group;
    group.original = resolve(base_dir, path_string(obj, "original", line_no));
    group.enhanced = path_list(obj, "enhanced", base_dir, line_no);
    group.degraded = path_list(obj, "degraded", base_dir, line_no);
    if (group.enhanced.empty()) bad_line(line_no, "group needs at least one enhanced image");
    if (!group.degraded.empty() && group.degraded.size() != 8) {
      bad_line(line_no, "group must list exactly 8 degraded images (or none)");
    }
    groups.push_back(std::move(group));
  });
  return groups;
}

std::vector<EvalGroup> load_eval_manifest(const std::filesystem::path& path) {
  return parse_eval_manifest(read_file(path, "manifest"), path.parent_path());
}

std::string format_eval_manifest(const std::vector<EvalGroup>& groups) {
  std::string out;
  for (const auto& g : groups) {
    json obj{{"original", g.original.generic_string()}, {"enhanced", json::array()}, {"degraded", json::array()}};
    for (const auto& p : g.enhanced) obj["enhanced"].push_back(p.generic_string());
    for (const auto& p : g.degraded) obj["degraded"].push_back(p.generic_string());
    out += obj.dump() + "\n";
  }
  return out;
}

std::vector<ManifestEntry> select_quality(const std::vector<ManifestEntry>& entries, Quality quality) {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.quality == quality) out.push_back(e);
  }
  return out;
}

}  // namespace imgrank
