#include "imgrank/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "imgrank/error.hpp"
#include "imgrank/parallel.hpp"
#include "imgrank/random.hpp"

namespace imgrank {

namespace {

double linf(const ParamTriple& a, const ParamTriple& b) {
  return std::max({std::abs(a.s - b.s), std::abs(a.b - b.b), std::abs(a.c - b.c)});
}

std::pair<double, double> relative_range(double center, double half_width, double lo_limit, double hi_limit) {
  const double lo = std::clamp(center * (1.0 - half_width), lo_limit, hi_limit);
  const double hi = std::clamp(center * (1.0 + half_width), lo_limit, hi_limit);
  return {lo, hi};
}

double gain_for(double from, double to) { return from > 0.0 ? to / from : 1.0; }

// Longer side scaled to `long_side`, aspect kept.
RgbImage working_copy(const RgbImage& img, int long_side) {
  const int longer = std::max(img.width(), img.height());
  if (longer == long_side) return img;
  const double scale = static_cast<double>(long_side) / longer;
  return resize_image(img, std::max(1, static_cast<int>(std::lround(img.width() * scale))),
                      std::max(1, static_cast<int>(std::lround(img.height() * scale))));
}

}  // namespace

bool ParamBox::contains(const ParamTriple& p, double slack) const {
  return p.s >= lo.s - slack && p.s <= hi.s + slack && p.b >= lo.b - slack && p.b <= hi.b + slack &&
         p.c >= lo.c - slack && p.c <= hi.c + slack;
}

ParamTriple ParamBox::project(const ParamTriple& p) const {
  return {std::clamp(p.s, lo.s, hi.s), std::clamp(p.b, lo.b, hi.b), std::clamp(p.c, lo.c, hi.c)};
}

ParamBox clamp_box(const ParamTriple& query, const SamplingOptions& options) {
  const auto [s_lo, s_hi] = relative_range(query.s, options.clamp_bs, 0.0, 1.0);
  const auto [b_lo, b_hi] = relative_range(query.b, options.clamp_bs, 0.0, 1.0);
  const auto [c_lo, c_hi] = relative_range(query.c, options.clamp_c, 0.0, 0.5);
  return ParamBox{{s_lo, b_lo, c_lo}, {s_hi, b_hi, c_hi}};
}

std::vector<std::size_t> allocate_samples(const std::vector<double>& scores, std::size_t n_target) {
  std::vector<std::size_t> out(scores.size(), 0);
  std::vector<double> finite;
  for (double s : scores) {
    if (std::isfinite(s)) finite.push_back(s);
  }
  if (finite.empty()) {
    throw Error(ErrorKind::NonFinite, "enhance", "all retrieved scores are non-finite");
  }
  const double mean = std::accumulate(finite.begin(), finite.end(), 0.0) / static_cast<double>(finite.size());
  double var = 0.0;
  for (double s : finite) var += (s - mean) * (s - mean);
  double temperature = std::sqrt(var / static_cast<double>(finite.size()));
  if (!(temperature > 0.0)) temperature = 1.0;
  const double peak = *std::max_element(finite.begin(), finite.end());

  std::vector<double> weight(scores.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) continue;
    weight[i] = std::exp((scores[i] - peak) / temperature);
    total += weight[i];
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = static_cast<std::size_t>(std::llround(static_cast<double>(n_target) * weight[i] / total));
  }
  return out;
}

std::vector<ParamTriple> sample_parameters(const ParamTriple& query, const std::vector<ScoredParams>& retrieved,
                                           std::uint64_t seed, const SamplingOptions& options) {
  if (retrieved.empty()) throw Error(ErrorKind::EmptyInput, "enhance", "no retrieved images to sample around");
  if (options.min_candidates == 0 || options.min_candidates > options.max_candidates) {
    throw Error(ErrorKind::InvalidArgument, "enhance", "candidate bounds must satisfy 0 < min <= max");
  }
  std::vector<double> scores;
  scores.reserve(retrieved.size());
  for (const auto& r : retrieved) scores.push_back(r.score);
  const std::vector<std::size_t> allocation = allocate_samples(scores, options.n_target);
  const ParamBox box = clamp_box(query, options);

  struct Sample {
    ParamTriple target;
    double weight;
  };
  std::vector<Sample> kept;
  auto is_duplicate = [&](const ParamTriple& t) {
    return std::any_of(kept.begin(), kept.end(),
                       [&](const Sample& k) { return linf(k.target, t) < options.dedupe_radius; });
  };

  Rng rng(seed);
  for (std::size_t i = 0; i < retrieved.size(); ++i) {
    for (std::size_t k = 0; k < allocation[i]; ++k) {
      ParamTriple t = retrieved[i].params;
      t.s += options.jitter_sigma * rng.normal();
      t.b += options.jitter_sigma * rng.normal();
      t.c += options.jitter_sigma * rng.normal();
      t = box.project(t);
      if (!is_duplicate(t)) kept.push_back({t, retrieved[i].score});
    }
  }

  // Pad with uniform draws inside the box. A box too small to hold enough
  // distinct targets eventually accepts repeats so the count is always met.
  constexpr int kDistinctAttempts = 64;
  while (kept.size() < options.min_candidates) {
    ParamTriple t;
    int attempts = 0;
    do {
      t = {rng.uniform(box.lo.s, box.hi.s), rng.uniform(box.lo.b, box.hi.b), rng.uniform(box.lo.c, box.hi.c)};
    } while (is_duplicate(t) && ++attempts < kDistinctAttempts);
    kept.push_back({t, -std::numeric_limits<double>::infinity()});
  }

  if (kept.size() > options.max_candidates) {
    std::vector<std::size_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return kept[a].weight > kept[b].weight; });
    order.resize(options.max_candidates);
    std::sort(order.begin(), order.end());
    std::vector<Sample> trimmed;
    for (std::size_t i : order) trimmed.push_back(kept[i]);
    kept = std::move(trimmed);
  }

  std::vector<ParamTriple> out;
  out.reserve(kept.size());
  for (const auto& k : kept) out.push_back(k.target);
  return out;
}

GainSpec steering_gains(const ParamTriple& query, const ParamTriple& target) {
  return GainSpec{gain_for(query.b, target.b), gain_for(query.s, target.s), gain_for(query.c, target.c)};
}

RgbImage generate_candidate(const RgbImage& img, const ParamTriple& target) {
  return apply_gains(img, steering_gains(scalar_params(img), target));
}

CandidateReport enhance(const RgbImage& img, const RankingModel& model, const CorpusIndex& index, std::uint64_t seed,
                        const EnhanceOptions& options) {
  if (index.entries.empty()) throw Error(ErrorKind::EmptyInput, "enhance", "index is empty");
  if (!model.hue_bins.matches(index.hue_bins)) {
    throw Error(ErrorKind::DimensionMismatch, "enhance", "model and index were built with different hue-bin tables");
  }
  const HueBinTable& bins = model.hue_bins;
  const RgbImage work = working_copy(img, options.canonical_size);
  const ParamTriple query = scalar_params(work);

  CandidateReport report;
  report.sampling_seed = seed;
  report.query_params = query;
  const RetrievalResult hits = retrieve(index, work, options.k_retrieve);
  report.warnings = hits.warnings;
  std::vector<ScoredParams> retrieved;
  retrieved.reserve(hits.hits.size());
  for (const auto& h : hits.hits) {
    const IndexEntry& e = index.entries[h.entry];
    retrieved.push_back({e.params, score(model, e.features)});
  }

  std::vector<ParamTriple> targets = sample_parameters(query, retrieved, seed, options.sampling);
  std::sort(targets.begin(), targets.end());
  report.candidates.resize(targets.size());
  parallel_for(targets.size() + 1, options.jobs, [&](std::size_t i) {
    if (i == targets.size()) {
      report.original_score = score(model, extract_features(work, bins, options.canonical_size));
      return;
    }
    Candidate& c = report.candidates[i];
    c.target = targets[i];
    c.gains = steering_gains(query, c.target);
    const RgbImage candidate = apply_gains(work, c.gains);
    c.achieved = scalar_params(candidate);
    c.score = score(model, extract_features(candidate, bins, options.canonical_size));
  });

  report.chosen_score = report.original_score;
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    if (report.candidates[i].score > report.chosen_score) {
      report.chosen_score = report.candidates[i].score;
      report.chosen_index = i;
    }
  }
  report.chosen = report.chosen_index ? apply_gains(img, report.candidates[*report.chosen_index].gains) : img;
  return report;
}

std::string candidates_csv(const CandidateReport& report) {
  std::ostringstream out;
  out.precision(9);
  out << "target_s,target_b,target_c,achieved_s,achieved_b,achieved_c,score\n";
  for (const auto& c : report.candidates) {
    out << c.target.s << ',' << c.target.b << ',' << c.target.c << ',' << c.achieved.s << ',' << c.achieved.b << ','
        << c.achieved.c << ',' << c.score << '\n';
  }
  return out.str();
}

}  // namespace imgrank
