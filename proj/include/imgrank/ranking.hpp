#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgrank/degrade.hpp"
#include "imgrank/features.hpp"
#include "imgrank/hue_bins.hpp"
#include "imgrank/retrieval.hpp"

namespace imgrank {

enum class Variant : std::uint32_t { V3176 = 0, V2744 = 1 };

std::size_t variant_dim(Variant v);
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

enum class PairKind : std::uint32_t { QueryVsRetrieved, DegradedVsQuery };

/// One ordering constraint: score(upper) should exceed score(lower).
struct RankPair {
  std::vector<double> lower;
  std::vector<double> upper;
  PairKind kind = PairKind::QueryVsRetrieved;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct RankingModel {
  Variant variant = Variant::V3176;
  std::vector<double> w;
  double c_tradeoff = 1.0;
  std::uint32_t epochs = 0;
  std::uint64_t seed = 0;
  HueBinTable hue_bins;

  friend bool operator==(const RankingModel&, const RankingModel&) = default;
};

/// A low-quality training image with its already-extracted features.
struct TrainingQuery {
  RgbImage image;
  FeatureBlock features;
};

struct PairBuildOptions {
  std::size_t k_retrieve = 100;
  std::size_t pairs_per_query = 25;
  DegradationTable degradation = default_degradation_table();
  int canonical_size = kDefaultCanonicalSize;
  unsigned jobs = 1;
};

struct PairSet {
  std::vector<RankPair> pairs;
  std::vector<std::string> warnings;
};

/// Query-below-retrieved pairs for the top `pairs_per_query` neighbours and
/// degraded-below-query pairs for the 8 degraded versions. Under V2744 each
/// conceptual pair becomes four, one per parameter, sharing the visual prefix.
PairSet build_training_pairs(const std::vector<TrainingQuery>& queries, const CorpusIndex& index, Variant variant,
                             const PairBuildOptions& options = {});

struct TrainOptions {
  double c_tradeoff = 1.0;
  std::uint32_t epochs = 20;
  std::uint64_t seed = 0;
};

struct TrainResult {
  RankingModel model;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::vector<double> epoch_objectives;  // after each epoch
  double satisfaction = 0.0;
};

/// Primal objective 1/2 |w|^2 + C * sum max(0, 1 - w.(upper - lower)).
double ranking_objective(std::span<const double> w, const std::vector<RankPair>& pairs, double c_tradeoff);

/// Seeded stochastic subgradient descent (step 1/(lambda t), lambda =
/// 1/(C |pairs|), projection onto the ball of radius 1/sqrt(lambda)).
TrainResult train(const std::vector<RankPair>& pairs, Variant variant, const TrainOptions& options,
                  const HueBinTable& hue_bins = {});

/// w.f for a raw layout vector of the model's dimension.
double score_vector(const RankingModel& model, std::span<const double> f);

/// V3176: w.concat_3176(fb). V2744: mean over n of w.per_param_2744(fb, n).
double score(const RankingModel& model, const FeatureBlock& fb);

/// Fraction of pairs with w.upper > w.lower (strict).
double constraint_satisfaction(const RankingModel& model, const std::vector<RankPair>& pairs);

std::string serialize_model(const RankingModel& model);
RankingModel deserialize_model(std::string_view bytes);
void save_model(const RankingModel& model, const std::filesystem::path& path);
RankingModel load_model(const std::filesystem::path& path);

/// Header fields as a JSON object (weights omitted).
std::string model_header_json(const RankingModel& model);

}  // namespace imgrank
