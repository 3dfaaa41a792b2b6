#include <doctest.h>

#include <cmath>
#include <numeric>

#include "imgrank/degrade.hpp"
#include "imgrank/enhance.hpp"
#include "imgrank/error.hpp"
#include "imgrank/random.hpp"
#include "imgrank/synth.hpp"
#include "support.hpp"

using namespace imgrank;

namespace {

std::vector<ScoredParams> retrieved_set(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ScoredParams> out(n);
  for (auto& r : out) {
    r.params = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng.uniform(0.15, 0.3)};
    r.score = rng.normal();
  }
  return out;
}

RankingModel brightness_model(const HueBinTable& bins) {
  RankingModel m;
  m.variant = Variant::V3176;
  m.w.assign(3176, 0.0);
  for (std::size_t cell = 0; cell < 9; ++cell) {
    for (std::size_t i = 0; i < 16; ++i) m.w[2600 + 144 + cell * 16 + i] = static_cast<double>(i);
  }
  m.hue_bins = bins;
  return m;
}

}  // namespace

TEST_CASE("softmax allocation") {
  const auto uniform = allocate_samples(std::vector<double>(100, 0.3), 200);
  REQUIRE(uniform.size() == 100);
  for (auto n : uniform) CHECK(std::abs(static_cast<double>(n) - 2.0) <= 1.0);

  std::vector<double> scores(100);
  Rng rng(6);
  for (double& s : scores) s = rng.uniform();
  scores.push_back(1e3);
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  const double t = std::sqrt(var / static_cast<double>(scores.size()));
  REQUIRE(scores.back() - 1.0 > 10.0 * t);
  const auto skewed = allocate_samples(scores, 200);
  const double total = static_cast<double>(std::accumulate(skewed.begin(), skewed.end(), std::size_t{0}));
  CHECK(static_cast<double>(skewed.back()) / total >= 0.8);

  // Softmax arithmetic: exp(d/T) over the sum, computed by hand.
  double denom = 0.0;
  for (double s : scores) denom += std::exp((s - scores.back()) / t);
  CHECK(std::abs(static_cast<double>(skewed.back()) - std::round(200.0 / denom)) <= 1.0);
}

TEST_CASE("sampled targets stay in the clamp box with a bounded count") {
  const ParamTriple query{0.45, 0.5, 0.22};
  const SamplingOptions opts;
  const ParamBox box = clamp_box(query, opts);
  CHECK(box.lo.s == doctest::Approx(0.36));
  CHECK(box.hi.b == doctest::Approx(0.6));
  CHECK(box.hi.c == doctest::Approx(0.2288));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto targets = sample_parameters(query, retrieved_set(100, seed), seed, opts);
    CHECK(targets.size() >= 150);
    CHECK(targets.size() <= 250);
    for (const auto& t : targets) {
      CHECK(std::abs(t.s - query.s) / query.s <= 0.20 + 1e-12);
      CHECK(std::abs(t.b - query.b) / query.b <= 0.20 + 1e-12);
      CHECK(std::abs(t.c - query.c) / query.c <= 0.04 + 1e-12);
    }
    CHECK(sample_parameters(query, retrieved_set(100, seed), seed, opts) == targets);
  }
  const auto few = sample_parameters(query, retrieved_set(2, 1), 1, opts);
  CHECK(few.size() >= 150);
  CHECK_THROWS_AS(sample_parameters(query, {}, 0, opts), Error);
}

TEST_CASE("candidate steering") {
  RgbImage img = support::noise_image(12, 60, 60);
  for (double& v : img.data()) v = 0.3 + 0.3 * v;
  const ParamTriple p = scalar_params(img);
  const RgbImage same = generate_candidate(img, p);
  for (std::size_t i = 0; i < img.data().size(); ++i) CHECK(std::abs(same.data()[i] - img.data()[i]) <= 1e-6);

  const RgbImage brighter = generate_candidate(img, {p.s, 1.1 * p.b, p.c});
  CHECK(std::abs(scalar_params(brighter).b - 1.1 * p.b) <= 1e-3);
  const RgbImage wild = generate_candidate(img, {1.0, 1.0, 0.5});
  for (double v : wild.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  const GainSpec g = steering_gains({0.0, 0.5, 0.2}, {0.3, 0.6, 0.1});
  CHECK(g.saturation == 1.0);
  CHECK(g.brightness == doctest::Approx(1.2));
  CHECK(g.contrast == doctest::Approx(0.5));
}

TEST_CASE("enhance picks the argmax and is reproducible") {
  const CorpusIndex& index = support::vivid_index();
  const RankingModel model = brightness_model(index.hue_bins);
  const RgbImage query = synth_dull_scene(77, theme_hue(2));
  EnhanceOptions opts;
  opts.jobs = 2;
  const CandidateReport a = enhance(query, model, index, 5, opts);
  CHECK(a.candidates.size() >= 150);
  CHECK(a.candidates.size() <= 250);
  CHECK(a.chosen_score >= a.original_score);
  CHECK(a.chosen_index.has_value());
  for (const auto& c : a.candidates) CHECK(c.score <= a.chosen_score);
  CHECK(a.warnings.size() == 1);
  REQUIRE(a.chosen_index);
  CHECK(a.candidates[*a.chosen_index].score == a.chosen_score);
  CHECK(a.chosen.width() == query.width());
  CHECK(scalar_params(a.chosen).b > scalar_params(query).b);

  const CandidateReport b = enhance(query, model, index, 5, {});
  CHECK(candidates_csv(a) == candidates_csv(b));
  CHECK(a.chosen == b.chosen);

  RankingModel flat = model;
  std::fill(flat.w.begin(), flat.w.end(), 0.0);
  const CandidateReport tie = enhance(query, flat, index, 5, opts);
  CHECK_FALSE(tie.chosen_index.has_value());
  CHECK(tie.chosen == query);

  RankingModel other = model;
  other.hue_bins = HueBinTable({0.0, 180.0});
  CHECK_THROWS_AS(enhance(query, other, index, 5, opts), Error);
  CHECK_THROWS_AS(enhance(query, model, CorpusIndex{}, 5, opts), Error);
}
