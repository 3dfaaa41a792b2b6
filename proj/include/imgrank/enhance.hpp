#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imgrank/degrade.hpp"
#include "imgrank/features.hpp"
#include "imgrank/ranking.hpp"
#include "imgrank/retrieval.hpp"

namespace imgrank {

struct SamplingOptions {
  std::size_t n_target = 200;
  double jitter_sigma = 0.02;
  double dedupe_radius = 0.005;
  double clamp_bs = 0.20;  // relative box half-width for saturation and brightness
  double clamp_c = 0.04;   // relative box half-width for contrast
  std::size_t min_candidates = 150;
  std::size_t max_candidates = 250;
};

/// A retrieved neighbour's scalar parameters and model score.
struct ScoredParams {
  ParamTriple params;
  double score = 0.0;
};

/// Per-coordinate bounds of the steering box around the query parameters.
struct ParamBox {
  ParamTriple lo;
  ParamTriple hi;

  bool contains(const ParamTriple& p, double slack = 1e-12) const;
  ParamTriple project(const ParamTriple& p) const;
};

ParamBox clamp_box(const ParamTriple& query, const SamplingOptions& options);

/// Samples allocated to each neighbour: round(n_target * softmax(score / T)),
/// T = population std of the scores (1 when zero).
std::vector<std::size_t> allocate_samples(const std::vector<double>& scores, std::size_t n_target);

/// Score-weighted sampling of parameter targets around the neighbours'
/// parameters, projected into the query's steering box, deduplicated, then
/// padded or trimmed into [min_candidates, max_candidates].
std::vector<ParamTriple> sample_parameters(const ParamTriple& query, const std::vector<ScoredParams>& retrieved,
                                           std::uint64_t seed, const SamplingOptions& options = {});

/// Gains that move `query` onto `target` (gain 1 where the query value is 0).
GainSpec steering_gains(const ParamTriple& query, const ParamTriple& target);

RgbImage generate_candidate(const RgbImage& img, const ParamTriple& target);

struct Candidate {
  ParamTriple target;
  ParamTriple achieved;
  GainSpec gains;
  double score = 0.0;
};

struct CandidateReport {
  RgbImage chosen;
  double chosen_score = 0.0;
  double original_score = 0.0;
  std::optional<std::size_t> chosen_index;  // empty when the original won
  std::vector<Candidate> candidates;        // sorted by target triple
  ParamTriple query_params;  // (s, b, c) of the working copy
  std::uint64_t sampling_seed = 0;
  std::vector<std::string> warnings;
};

struct EnhanceOptions {
  std::size_t k_retrieve = 100;
  SamplingOptions sampling;
  int canonical_size = kDefaultCanonicalSize;
  unsigned jobs = 1;
};

/// Scores run on a working copy scaled to the canonical size; the chosen
/// gains are then rendered on the full-resolution input.
CandidateReport enhance(const RgbImage& img, const RankingModel& model, const CorpusIndex& index,
                        std::uint64_t seed, const EnhanceOptions& options = {});

/// CSV with header target_s,target_b,target_c,achieved_s,achieved_b,achieved_c,score.
std::string candidates_csv(const CandidateReport& report);

}  // namespace imgrank
