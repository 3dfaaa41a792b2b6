#include <doctest.h>

#include <cmath>

#include "imgrank/error.hpp"
#include "imgrank/random.hpp"
#include "imgrank/ranking.hpp"
#include "imgrank/synth.hpp"
#include "support.hpp"

using namespace imgrank;

namespace {

std::vector<RankPair> bump_pairs(std::size_t count, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RankPair> pairs(count);
  for (auto& p : pairs) {
    p.lower.resize(dim);
    for (double& v : p.lower) v = rng.uniform();
    p.upper = p.lower;
    p.upper[0] += 1.0;
  }
  return pairs;
}

}  // namespace

TEST_CASE("variant parsing") {
  CHECK(parse_variant("3176") == Variant::V3176);
  CHECK(parse_variant("v2744") == Variant::V2744);
  CHECK(variant_dim(Variant::V2744) == 2744);
  CHECK_THROWS_AS(parse_variant("4000"), Error);
}

TEST_CASE("pair counts per query") {
  const CorpusIndex& index = support::vivid_index();
  TrainingQuery q;
  q.image = synth_dull_scene(5, theme_hue(1));
  q.features = extract_features(q.image, index.hue_bins);
  const auto p3176 = build_training_pairs({q}, index, Variant::V3176);
  CHECK(p3176.pairs.size() == 33);
  for (const auto& p : p3176.pairs) {
    CHECK(p.lower.size() == 3176);
    CHECK(p.upper.size() == 3176);
  }
  CHECK(std::count_if(p3176.pairs.begin(), p3176.pairs.end(),
                      [](const RankPair& p) { return p.kind == PairKind::DegradedVsQuery; }) == 8);
  const auto p2744 = build_training_pairs({q}, index, Variant::V2744);
  CHECK(p2744.pairs.size() == 132);
  CHECK(p2744.pairs.front().lower.size() == 2744);
}

TEST_CASE("separable bump set trains to full satisfaction") {
  const auto pairs = bump_pairs(200, 3176, 3);
  const TrainResult r = train(pairs, Variant::V3176, {1.0, 20, 9});
  CHECK(r.model.w[0] > 0.0);
  CHECK(r.satisfaction == 1.0);
  CHECK(constraint_satisfaction(r.model, pairs) == 1.0);
  for (const auto& p : pairs) CHECK(score_vector(r.model, p.upper) > score_vector(r.model, p.lower));
  CHECK(r.final_objective < r.initial_objective);
  CHECK(r.initial_objective == doctest::Approx(ranking_objective(std::vector<double>(3176, 0.0), pairs, 1.0)));
  CHECK(r.epoch_objectives.size() == 20);

  const TrainResult again = train(pairs, Variant::V3176, {1.0, 20, 9});
  CHECK(serialize_model(again.model) == serialize_model(r.model));

  RankingModel negated = r.model;
  for (double& w : negated.w) w = -w;
  CHECK(constraint_satisfaction(negated, pairs) == 0.0);
  RankingModel zero = r.model;
  std::fill(zero.w.begin(), zero.w.end(), 0.0);
  CHECK(constraint_satisfaction(zero, pairs) == 0.0);
}

TEST_CASE("training rejects bad input") {
  CHECK_THROWS_AS(train({}, Variant::V3176, {}), Error);
  CHECK_THROWS_AS(train(bump_pairs(3, 10, 1), Variant::V3176, {}), Error);
  CHECK_THROWS_AS(train(bump_pairs(3, 3176, 1), Variant::V3176, {0.0, 20, 0}), Error);
}

TEST_CASE("objective is the regularizer plus weighted hinge losses") {
  std::vector<RankPair> pairs(2);
  pairs[0].lower = {0.0, 0.0};
  pairs[0].upper = {1.0, 0.0};
  pairs[1].lower = {0.0, 1.0};
  pairs[1].upper = {0.0, 0.0};
  const std::vector<double> w{2.0, 0.5};
  // margins 2 and -0.5: hinge 0 and 1.5
  CHECK(ranking_objective(w, pairs, 3.0) == doctest::Approx(0.5 * 4.25 + 3.0 * 1.5));
}

TEST_CASE("scoring") {
  RankingModel m;
  m.variant = Variant::V3176;
  m.w.assign(3176, 0.0);
  const FeatureBlock fb = support::random_feature_block(8);
  CHECK(score(m, fb) == 0.0);

  m.variant = Variant::V2744;
  Rng rng(4);
  m.w.resize(2744);
  for (double& w : m.w) w = rng.uniform(-1.0, 1.0);
  double naive = 0.0;
  for (int n = 1; n <= 4; ++n) {
    double dot = 0.0;
    for (std::size_t i = 0; i < 2600; ++i) dot += m.w[i] * fb.visual[i];
    for (std::size_t i = 0; i < 144; ++i) dot += m.w[2600 + i] * fb.param(n)[i];
    naive += dot;
  }
  CHECK(std::abs(score(m, fb) - naive / 4.0) <= 1e-12);
  CHECK_THROWS_AS(score_vector(m, std::vector<double>(3176, 0.0)), Error);
}

TEST_CASE("model persistence") {
  support::TempDir dir("model");
  const TrainResult r = train(bump_pairs(20, 2744, 2), Variant::V2744, {1.0, 3, 1}, support::default_bins());
  save_model(r.model, dir / "m.bin");
  const RankingModel back = load_model(dir / "m.bin");
  CHECK(back == r.model);
  const std::string bytes = serialize_model(r.model);
  CHECK_THROWS_AS(deserialize_model(bytes + "x"), Error);
  CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() - 1)), Error);
  std::string other = bytes;
  other[12] = 0;  // variant field -> 3176 while dim stays 2744
  CHECK_THROWS_AS(deserialize_model(other), Error);
  CHECK(model_header_json(back).find("\"variant\": \"2744\"") != std::string::npos);
  CHECK_THROWS_AS(load_model(dir / "none.bin"), Error);
}
