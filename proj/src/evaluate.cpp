#include "imgrank/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include <json.hpp>

#include "imgrank/error.hpp"
#include "imgrank/parallel.hpp"

namespace imgrank {

std::string Fraction::str() const { return std::to_string(numerator) + "/" + std::to_string(denominator); }

VerificationStats summarize(const std::vector<GroupScores>& groups) {
  VerificationStats stats;
  for (const auto& g : groups) {
    if (g.enhanced.empty()) {
      throw Error(ErrorKind::InvalidArgument, "evaluate", "group has no enhanced scores");
    }
    if (!g.degraded.empty() && g.degraded.size() != 8) {
      throw Error(ErrorKind::InvalidArgument, "evaluate", "group must have 0 or 8 degraded scores");
    }
    ++stats.n_images;
    ++stats.enhanced_beats_original.denominator;
    if (std::any_of(g.enhanced.begin(), g.enhanced.end(), [&](double s) { return s > g.original; })) {
      ++stats.enhanced_beats_original.numerator;
    }
    if (g.degraded.empty()) continue;
    const auto below = std::count_if(g.degraded.begin(), g.degraded.end(), [&](double s) { return s < g.original; });
    ++stats.any_degraded_below.denominator;
    ++stats.seven_of_eight_below.denominator;
    if (below >= 1) ++stats.any_degraded_below.numerator;
    if (below >= 7) ++stats.seven_of_eight_below.numerator;
  }
  return stats;
}

VerificationStats verify(const RankingModel& model, const std::vector<EvalGroup>& groups,
                         const VerifyOptions& options) {
  std::vector<std::optional<GroupScores>> scored(groups.size());
  std::vector<std::string> failures(groups.size());
  parallel_for(groups.size(), options.jobs, [&](std::size_t i) {
    const EvalGroup& g = groups[i];
    auto score_path = [&](const std::filesystem::path& p) {
      return score(model, extract_features(load_image(p), model.hue_bins, options.canonical_size));
    };
    try {
      GroupScores s;
      s.original = score_path(g.original);
      for (const auto& p : g.enhanced) s.enhanced.push_back(score_path(p));
      for (const auto& p : g.degraded) s.degraded.push_back(score_path(p));
      scored[i] = std::move(s);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MissingFile && e.kind() != ErrorKind::UnsupportedFormat) throw;
      failures[i] = e.what();
    }
  });

  std::vector<GroupScores> ok;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (scored[i]) {
      ok.push_back(std::move(*scored[i]));
    } else {
      warnings.push_back("skipped group " + groups[i].original.generic_string() + " (" + failures[i] + ")");
    }
  }
  VerificationStats stats = summarize(ok);
  stats.skipped = groups.size() - ok.size();
  stats.warnings = std::move(warnings);
  return stats;
}

std::string stats_json(const VerificationStats& stats) {
  auto frac = [](const Fraction& f) {
    return nlohmann::ordered_json{{"numerator", f.numerator}, {"denominator", f.denominator}, {"value", f.value()}};
  };
  nlohmann::ordered_json j;
  j["n_images"] = stats.n_images;
  j["skipped"] = stats.skipped;
  j["frac_enhanced_beats_original"] = frac(stats.enhanced_beats_original);
  j["frac_any_degraded_below"] = frac(stats.any_degraded_below);
  j["frac_7of8_degraded_below"] = frac(stats.seven_of_eight_below);
  return j.dump(2);
}

std::string stats_table(const VerificationStats& stats) {
  auto row = [](const char* label, const Fraction& f) {
    char line[160];
    std::snprintf(line, sizeof line, "%-44s %9s  %6.2f%%\n", label, f.str().c_str(), 100.0 * f.value());
    return std::string(line);
  };
  std::string out;
  out += "images scored: " + std::to_string(stats.n_images) + " (skipped " + std::to_string(stats.skipped) + ")\n";
  out += row("at least one enhanced version scores higher", stats.enhanced_beats_original);
  out += row("at least one degraded version scores lower", stats.any_degraded_below);
  out += row("at least 7 of 8 degraded versions score lower", stats.seven_of_eight_below);
  return out;
}

}  // namespace imgrank
