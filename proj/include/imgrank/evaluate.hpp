#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "imgrank/manifest.hpp"
#include "imgrank/ranking.hpp"

namespace imgrank {

struct Fraction {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  double value() const { return denominator == 0 ? 0.0 : static_cast<double>(numerator) / denominator; }
  std::string str() const;  // "451/500"
};

struct VerificationStats {
  std::size_t n_images = 0;
  std::size_t skipped = 0;
  Fraction enhanced_beats_original;  // some enhanced version scores strictly higher
  Fraction any_degraded_below;       // some degraded version scores strictly lower
  Fraction seven_of_eight_below;     // at least 7 of 8 degraded versions score strictly lower
  std::vector<std::string> warnings;

  double frac_enhanced_beats_original() const { return enhanced_beats_original.value(); }
  double frac_any_degraded_below() const { return any_degraded_below.value(); }
  double frac_7of8_degraded_below() const { return seven_of_eight_below.value(); }
};

/// Scores of one evaluation group.
struct GroupScores {
  double original = 0.0;
  std::vector<double> enhanced;
  std::vector<double> degraded;  // empty or 8 entries
};

VerificationStats summarize(const std::vector<GroupScores>& groups);

struct VerifyOptions {
  int canonical_size = 512;
  unsigned jobs = 1;
};

/// Loads and scores every group; groups with unreadable images are skipped
/// with a warning and left out of every denominator.
VerificationStats verify(const RankingModel& model, const std::vector<EvalGroup>& groups,
                         const VerifyOptions& options = {});

std::string stats_json(const VerificationStats& stats);
std::string stats_table(const VerificationStats& stats);

}  // namespace imgrank
