#include <doctest.h>

#include <cmath>

#include "imgrank/error.hpp"
#include "imgrank/hue_bins.hpp"
#include "support.hpp"

using namespace imgrank;

namespace {

imgrank::Rgb hsv_oracle(double h, double s, double v) {
  auto channel = [&](double n) {
    const double k = std::fmod(n + h / 60.0, 6.0);
    return v - v * s * std::max(0.0, std::min({k, 4.0 - k, 1.0}));
  };
  return {channel(5), channel(3), channel(1)};
}

double grid_distance_oracle(double hm, double hn) {
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const double s = i / 10.0, v = j / 10.0;
      worst = std::max(worst, delta_e_2000(support::lab_reference(hsv_oracle(hm, s, v)),
                                           support::lab_reference(hsv_oracle(hn, s, v))));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("grid distance agrees with an independent sweep") {
  for (const auto& [m, n] : {std::pair{0.0, 10.0}, std::pair{93.0, 123.0}, std::pair{200.0, 207.0}}) {
    CHECK(hue_grid_distance(m, n) == doctest::Approx(grid_distance_oracle(m, n)).epsilon(1e-3));
  }
  CHECK(hue_grid_distance(40.0, 40.0) == 0.0);
}

TEST_CASE("threshold 7 gives a table inside the accepted envelope") {
  const HueBinTable& bins = support::default_bins();
  CHECK(bins.bin_count() >= 20);
  CHECK(bins.bin_count() <= 35);
  CHECK(bins.bin_count() == 26);
  for (double s : bins.separations()) {
    CHECK(s >= 5.0);
    CHECK(s <= 45.0);
  }
  const auto& b = bins.boundaries();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double next = i + 1 < b.size() ? b[i + 1] : b[0] + 360.0;
    CHECK(hue_grid_distance(b[i], next) > 7.0);
  }
}

TEST_CASE("raw sweep closes a bin exactly when the distance first exceeds the threshold") {
  const auto raw = sweep_hue_boundaries({});
  REQUIRE(raw.size() >= 2);
  CHECK(raw.front() == 0.0);
  for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
    CHECK(hue_grid_distance(raw[i], raw[i + 1]) > 7.0);
    CHECK(hue_grid_distance(raw[i], raw[i + 1] - 1.0) <= 7.0);
  }
}

TEST_CASE("an unreachable threshold is rejected") {
  HueSweepOptions opts;
  opts.threshold = 1e9;
  CHECK_THROWS_AS(derive_hue_bins(opts), Error);
}

TEST_CASE("bin lookup wraps below the first boundary") {
  const HueBinTable t({10.0, 100.0, 200.0});
  CHECK(t.bin_of(5.0) == 2);
  CHECK(t.bin_of(10.0) == 0);
  CHECK(t.bin_of(99.9) == 0);
  CHECK(t.bin_of(150.0) == 1);
  CHECK(t.bin_of(359.0) == 2);
  const auto sep = t.separations();
  REQUIRE(sep.size() == 3);
  CHECK(sep[2] == doctest::Approx(170.0));
  CHECK_THROWS_AS(HueBinTable({20.0, 10.0}), Error);
}

TEST_CASE("hue table text round trip") {
  const HueBinTable& bins = support::default_bins();
  const HueBinTable back = parse_hue_bins(format_hue_bins(bins));
  CHECK(back.matches(bins));
  CHECK_THROWS_AS(parse_hue_bins("garbage\n"), Error);
}
