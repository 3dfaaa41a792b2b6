#include <doctest.h>

#include "imgrank/degrade.hpp"
#include "imgrank/evaluate.hpp"
#include "imgrank/manifest.hpp"
#include "imgrank/synth.hpp"
#include "support.hpp"

using namespace imgrank;

TEST_CASE("summary fractions use strict inequalities") {
  std::vector<GroupScores> groups(4);
  groups[0] = {1.0, {1.5, 0.2}, {0, 0, 0, 0, 0, 0, 0, 0}};
  groups[1] = {1.0, {1.0}, {0, 0, 0, 0, 0, 0, 1.0, 2.0}};
  groups[2] = {1.0, {0.9}, {1, 1, 1, 1, 1, 1, 1, 1}};
  groups[3] = {1.0, {2.0}, {}};
  const VerificationStats s = summarize(groups);
  CHECK(s.n_images == 4);
  CHECK(s.enhanced_beats_original.str() == "2/4");
  CHECK(s.any_degraded_below.str() == "2/3");
  CHECK(s.seven_of_eight_below.str() == "1/3");
  CHECK(s.frac_any_degraded_below() == doctest::Approx(2.0 / 3.0));
  CHECK(stats_json(s).find("\"frac_enhanced_beats_original\"") != std::string::npos);
  CHECK(stats_table(s).find("2/4") != std::string::npos);
}

TEST_CASE("verify on constructed groups") {
  support::TempDir dir("eval");
  RankingModel m;
  m.variant = Variant::V3176;
  m.w.assign(3176, 0.0);
  for (std::size_t cell = 0; cell < 9; ++cell) {
    for (std::size_t i = 0; i < 16; ++i) m.w[2600 + 144 + cell * 16 + i] = static_cast<double>(i);
  }
  m.hue_bins = support::default_bins();

  std::vector<EvalGroup> better, copies;
  for (int i = 0; i < 3; ++i) {
    const RgbImage orig = synth_dull_scene(300 + i, theme_hue(i), {96, 96});
    const auto o = dir / ("o" + std::to_string(i) + ".png");
    const auto e = dir / ("e" + std::to_string(i) + ".png");
    const auto c = dir / ("c" + std::to_string(i) + ".png");
    save_image(orig, o);
    save_image(apply_gains(orig, {1.4, 1, 1}), e);
    save_image(orig, c);
    better.push_back({o, {e}, {}});
    copies.push_back({o, {c}, {}});
  }
  CHECK(verify(m, better, {96, 1}).frac_enhanced_beats_original() == 1.0);
  CHECK(verify(m, copies, {96, 2}).frac_enhanced_beats_original() == 0.0);

  copies.push_back({dir / "missing.png", {dir / "x.png"}, {}});
  const VerificationStats s = verify(m, copies, {96, 1});
  CHECK(s.n_images == 3);
  CHECK(s.skipped == 1);
  CHECK(s.warnings.size() == 1);
}
