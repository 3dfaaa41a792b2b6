#include "imgrank/ranking.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "imgrank/binary_io.hpp"
#include "imgrank/error.hpp"
#include "imgrank/parallel.hpp"
#include "imgrank/random.hpp"

namespace imgrank {

namespace {

constexpr std::string_view kModelMagic = "IMGRKMDL";

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double pair_margin(std::span<const double> w, const RankPair& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * (p.upper[i] - p.lower[i]);
  return m;
}

void check_pairs(const std::vector<RankPair>& pairs, std::size_t dim) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "ranking", "no training pairs");
  for (const auto& p : pairs) {
    if (p.lower.size() != dim || p.upper.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "ranking",
                  "pair vectors must have length " + std::to_string(dim));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(p.lower[i]) || !std::isfinite(p.upper[i])) {
        throw Error(ErrorKind::NonFinite, "ranking", "non-finite feature value in training pairs");
      }
    }
  }
}

void check_model_dim(const RankingModel& model) {
  if (model.w.size() != variant_dim(model.variant)) {
    throw Error(ErrorKind::DimensionMismatch, "ranking",
                "model weight length " + std::to_string(model.w.size()) + " does not match variant " +
                    std::string(to_string(model.variant)));
  }
}

void append_layouts(const FeatureBlock& lower, const FeatureBlock& upper, Variant variant, PairKind kind,
                    std::vector<RankPair>& out) {
  if (variant == Variant::V3176) {
    out.push_back({concat_3176(lower), concat_3176(upper), kind});
    return;
  }
  for (int n = 1; n <= static_cast<int>(kParamCount); ++n) {
    out.push_back({per_param_2744(lower, n), per_param_2744(upper, n), kind});
  }
}

}  // namespace

std::size_t variant_dim(Variant v) { return v == Variant::V3176 ? kDim3176 : kDim2744; }

std::string_view to_string(Variant v) { return v == Variant::V3176 ? "3176" : "2744"; }

Variant parse_variant(std::string_view text) {
  if (text == "3176" || text == "v3176") return Variant::V3176;
  if (text == "2744" || text == "v2744") return Variant::V2744;
  throw Error(ErrorKind::InvalidArgument, "ranking", "variant must be 3176 or 2744, got '" + std::string(text) + "'");
}

PairSet build_training_pairs(const std::vector<TrainingQuery>& queries, const CorpusIndex& index, Variant variant,
                             const PairBuildOptions& options) {
  if (queries.empty()) throw Error(ErrorKind::EmptyInput, "ranking", "no training queries");
  if (index.entries.empty()) throw Error(ErrorKind::EmptyInput, "ranking", "index is empty");
  if (options.pairs_per_query == 0 || options.k_retrieve == 0) {
    throw Error(ErrorKind::InvalidArgument, "ranking", "k_retrieve and pairs_per_query must be positive");
  }

  std::vector<std::vector<RankPair>> per_query(queries.size());
  std::vector<std::vector<std::string>> notes(queries.size());
  parallel_for(queries.size(), options.jobs, [&](std::size_t q) {
    const TrainingQuery& query = queries[q];
    check_feature_block(query.features);
    const RetrievalResult hits = retrieve(index, query.image, options.k_retrieve);
    if (hits.hits.empty()) {
      notes[q].push_back("query " + std::to_string(q) + ": empty retrieval, skipped");
      return;
    }
    const std::size_t used = std::min(options.pairs_per_query, hits.hits.size());
    for (std::size_t j = 0; j < used; ++j) {
      append_layouts(query.features, index.entries[hits.hits[j].entry].features, variant,
                     PairKind::QueryVsRetrieved, per_query[q]);
    }
    for (const RgbImage& bad : degraded_versions(query.image, options.degradation)) {
      const FeatureBlock fb = extract_features(bad, index.hue_bins, options.canonical_size);
      append_layouts(fb, query.features, variant, PairKind::DegradedVsQuery, per_query[q]);
    }
  });

  PairSet out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (auto& p : per_query[q]) out.pairs.push_back(std::move(p));
    for (auto& n : notes[q]) out.warnings.push_back(std::move(n));
  }
  return out;
}

double ranking_objective(std::span<const double> w, const std::vector<RankPair>& pairs, double c_tradeoff) {
  double hinge = 0.0;
  for (const auto& p : pairs) hinge += std::max(0.0, 1.0 - pair_margin(w, p));
  return 0.5 * dot(w, w) + c_tradeoff * hinge;
}

TrainResult train(const std::vector<RankPair>& pairs, Variant variant, const TrainOptions& options,
                  const HueBinTable& hue_bins) {
  const std::size_t dim = variant_dim(variant);
  check_pairs(pairs, dim);
  if (!(options.c_tradeoff > 0.0) || !std::isfinite(options.c_tradeoff)) {
    throw Error(ErrorKind::InvalidArgument, "ranking", "c_tradeoff must be positive");
  }
  if (options.epochs == 0) throw Error(ErrorKind::InvalidArgument, "ranking", "epochs must be positive");

  const double lambda = 1.0 / (options.c_tradeoff * static_cast<double>(pairs.size()));
  const double radius = 1.0 / std::sqrt(lambda);
  std::vector<double> w(dim, 0.0);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);

  TrainResult result;
  result.initial_objective = ranking_objective(w, pairs, options.c_tradeoff);
  std::uint64_t t = 0;
  for (std::uint32_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t idx : order) {
      ++t;
      const RankPair& p = pairs[idx];
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const bool active = pair_margin(w, p) < 1.0;
      const double shrink = 1.0 - eta * lambda;
      for (double& x : w) x *= shrink;
      if (active) {
        for (std::size_t i = 0; i < dim; ++i) w[i] += eta * (p.upper[i] - p.lower[i]);
      }
      const double norm = std::sqrt(dot(w, w));
      if (norm > radius) {
        const double s = radius / norm;
        for (double& x : w) x *= s;
      }
    }
    result.epoch_objectives.push_back(ranking_objective(w, pairs, options.c_tradeoff));
  }

  result.model = RankingModel{variant, std::move(w), options.c_tradeoff, options.epochs, options.seed, hue_bins};
  result.final_objective = result.epoch_objectives.back();
  result.satisfaction = constraint_satisfaction(result.model, pairs);
  return result;
}

double score_vector(const RankingModel& model, std::span<const double> f) {
  check_model_dim(model);
  if (f.size() != model.w.size()) {
    throw Error(ErrorKind::DimensionMismatch, "ranking",
                "feature length " + std::to_string(f.size()) + " does not match model dimension " +
                    std::to_string(model.w.size()));
  }
  return dot(model.w, f);
}

double score(const RankingModel& model, const FeatureBlock& fb) {
  check_model_dim(model);
  check_feature_block(fb);
  const std::span<const double> w(model.w);
  const double visual = dot(w.subspan(0, kVisualDim), fb.visual);
  if (model.variant == Variant::V3176) {
    double total = visual;
    for (int n = 1; n <= static_cast<int>(kParamCount); ++n) {
      total += dot(w.subspan(kVisualDim + (n - 1) * kParamDim, kParamDim), fb.param(n));
    }
    return total;
  }
  const auto tail = w.subspan(kVisualDim, kParamDim);
  double total = 0.0;
  for (int n = 1; n <= static_cast<int>(kParamCount); ++n) total += visual + dot(tail, fb.param(n));
  return total / static_cast<double>(kParamCount);
}

double constraint_satisfaction(const RankingModel& model, const std::vector<RankPair>& pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t satisfied = 0;
  for (const auto& p : pairs) {
    if (score_vector(model, p.upper) > score_vector(model, p.lower)) ++satisfied;
  }
  return static_cast<double>(satisfied) / static_cast<double>(pairs.size());
}

std::string serialize_model(const RankingModel& model) {
  check_model_dim(model);
  ByteWriter out;
  out.bytes(kModelMagic);
  out.u32(kModelFormatVersion);
  out.u32(static_cast<std::uint32_t>(model.variant));
  out.u32(static_cast<std::uint32_t>(model.w.size()));
  out.f64(model.c_tradeoff);
  out.u32(model.epochs);
  out.u64(model.seed);
  out.u32(static_cast<std::uint32_t>(model.hue_bins.bin_count()));
  out.f64s(model.hue_bins.boundaries());
  out.f64s(model.w);
  return out.buffer();
}

RankingModel deserialize_model(std::string_view bytes) {
  ByteReader in(bytes, "ranking", "model file");
  if (in.bytes(kModelMagic.size()) != kModelMagic) in.fail("bad magic");
  const std::uint32_t version = in.u32();
  if (version != kModelFormatVersion) in.fail("unsupported format version " + std::to_string(version));
  RankingModel model;
  const std::uint32_t variant = in.u32();
  if (variant > 1) in.fail("unknown variant tag");
  model.variant = static_cast<Variant>(variant);
  const std::uint32_t dim = in.u32();
  model.c_tradeoff = in.f64();
  model.epochs = in.u32();
  model.seed = in.u64();
  const std::uint32_t hue_count = in.u32();
  if (hue_count > 360) in.fail("bad hue-bin count");
  if (hue_count > 0) model.hue_bins = HueBinTable(in.f64s(hue_count));
  model.w = in.f64s(dim);
  if (in.remaining() != 0) in.fail("trailing bytes");
  if (dim != variant_dim(model.variant)) {
    throw Error(ErrorKind::DimensionMismatch, "ranking",
                "model file declares dimension " + std::to_string(dim) + " for variant " +
                    std::string(to_string(model.variant)));
  }
  return model;
}

void save_model(const RankingModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model), "ranking");
}

RankingModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path, "ranking")); }

std::string model_header_json(const RankingModel& model) {
  nlohmann::ordered_json j;
  j["magic"] = std::string(kModelMagic);
  j["format_version"] = kModelFormatVersion;
  j["variant"] = std::string(to_string(model.variant));
  j["dim"] = model.w.size();
  j["c_tradeoff"] = model.c_tradeoff;
  j["epochs"] = model.epochs;
  j["seed"] = model.seed;
  j["hue_bins"] = model.hue_bins.boundaries();
  return j.dump(2);
}

}  // namespace imgrank
