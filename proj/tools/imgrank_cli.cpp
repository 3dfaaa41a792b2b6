// imgrank command-line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "imgrank/config.hpp"
#include "imgrank/degrade.hpp"
#include "imgrank/enhance.hpp"
#include "imgrank/error.hpp"
#include "imgrank/evaluate.hpp"
#include "imgrank/features.hpp"
#include "imgrank/hue_bins.hpp"
#include "imgrank/manifest.hpp"
#include "imgrank/parallel.hpp"
#include "imgrank/ranking.hpp"
#include "imgrank/retrieval.hpp"
#include "imgrank/synth.hpp"
#include "imgrank/binary_io.hpp"

namespace fs = std::filesystem;
using namespace imgrank;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return 3;
    case ErrorKind::UnsupportedFormat: return 4;
    case ErrorKind::Io: return 5;
    case ErrorKind::InvalidArgument: return 6;
    case ErrorKind::DimensionMismatch: return 7;
    case ErrorKind::EmptyInput: return 8;
    case ErrorKind::NonFinite: return 9;
  }
  return 1;
}

// Config sources shared by every subcommand.
struct Settings {
  std::string config_file;
  std::map<std::string, std::string> overrides;

  Config resolve() const {
    Config config = config_file.empty() ? Config{} : load_config(config_file);
    apply_process_env(config);
    for (const auto& [key, value] : overrides) config.set(key, value);
    config.validate();
    return config;
  }
};

void add_settings(CLI::App* cmd, Settings& settings) {
  cmd->add_option("--config", settings.config_file, "key = value config file")->check(CLI::ExistingFile);
  const Config defaults;
  for (const auto& key : config_keys()) {
    cmd->add_option_function<std::string>(
           "--" + key.name, [&settings, name = key.name](const std::string& v) { settings.overrides[name] = v; },
           key.description + " (env IMGRANK_" + [&] {
             std::string up = key.name;
             for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
             return up;
           }() + ")")
        ->type_name("VALUE")
        ->default_str(defaults.get(key.name))
        ->group("Configuration");
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

HueBinTable bins_for(const Config& config, const std::string& bins_file) {
  return bins_file.empty() ? derive_hue_bins(config.hue_sweep()) : load_hue_bins(bins_file);
}

std::vector<TrainingQuery> load_queries(const std::vector<ManifestEntry>& entries, const HueBinTable& bins,
                                        const Config& config) {
  std::vector<TrainingQuery> queries(entries.size());
  std::vector<bool> ok(entries.size(), false);
  std::vector<std::string> failures(entries.size());
  parallel_for(entries.size(), config.worker_count(), [&](std::size_t i) {
    try {
      queries[i].image = load_image(entries[i].path);
      queries[i].features = extract_features(queries[i].image, bins, config.canonical_size);
      ok[i] = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MissingFile && e.kind() != ErrorKind::UnsupportedFormat) throw;
      failures[i] = e.what();
    }
  });
  std::vector<TrainingQuery> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (ok[i]) {
      out.push_back(std::move(queries[i]));
    } else {
      std::cerr << "warning: skipped query " << entries[i].path.generic_string() << " (" << failures[i] << ")\n";
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-adaptive image enhancement with a learned multi-level ranking model"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  Settings settings;

  // bins
  std::string bins_out;
  auto* bins_cmd = app.add_subcommand("bins", "Derive the CIEDE2000 hue-bin table");
  bins_cmd->add_option("--out", bins_out, "output table file")->required();
  add_settings(bins_cmd, settings);

  // build-index
  std::string manifest_path, index_path, bins_in;
  auto* index_cmd = app.add_subcommand("build-index", "Index the high-quality images of a corpus manifest");
  index_cmd->add_option("--manifest", manifest_path, "JSON-lines corpus manifest")->required();
  index_cmd->add_option("--out", index_path, "index file to write")->required();
  index_cmd->add_option("--bins", bins_in, "hue-bin table (derived from config when omitted)");
  add_settings(index_cmd, settings);

  // train
  std::string queries_path, model_path, variant_text = "3176";
  auto* train_cmd = app.add_subcommand("train", "Train a ranking model from low-quality queries");
  train_cmd->add_option("--index", index_path, "corpus index")->required();
  train_cmd->add_option("--queries", queries_path, "manifest whose \"low\" entries are the queries")->required();
  train_cmd->add_option("--variant", variant_text, "3176 or 2744")->capture_default_str();
  train_cmd->add_option("--out", model_path, "model file to write")->required();
  add_settings(train_cmd, settings);

  // enhance
  std::string input_path, output_path, dump_scores;
  auto* enhance_cmd = app.add_subcommand("enhance", "Enhance an image by score-guided parameter search");
  enhance_cmd->add_option("--model", model_path, "model file")->required();
  enhance_cmd->add_option("--index", index_path, "corpus index")->required();
  enhance_cmd->add_option("--input", input_path, "input image")->required();
  enhance_cmd->add_option("--output", output_path, "enhanced image (.png/.jpg)")->required();
  enhance_cmd->add_option("--dump-scores", dump_scores, "write the candidate table as CSV");
  add_settings(enhance_cmd, settings);

  // degrade
  std::string outdir;
  auto* degrade_cmd = app.add_subcommand("degrade", "Write the 8 degraded versions of an image");
  degrade_cmd->add_option("--input", input_path, "input image")->required();
  degrade_cmd->add_option("--outdir", outdir, "output directory")->required();
  add_settings(degrade_cmd, settings);

  // score
  auto* score_cmd = app.add_subcommand("score", "Print the model score of an image");
  score_cmd->add_option("--model", model_path, "model file")->required();
  score_cmd->add_option("--input", input_path, "input image")->required();
  score_cmd->add_option("--bins", bins_in, "hue-bin table that must match the model's");
  add_settings(score_cmd, settings);

  // retrieve
  std::size_t k = 0;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "List the nearest indexed images");
  retrieve_cmd->add_option("--index", index_path, "corpus index")->required();
  retrieve_cmd->add_option("--input", input_path, "query image")->required();
  retrieve_cmd->add_option("-k", k, "neighbours to list (default: k_retrieve)");
  add_settings(retrieve_cmd, settings);

  // evaluate
  std::string json_out;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score originals against enhanced and degraded versions");
  eval_cmd->add_option("--model", model_path, "model file")->required();
  eval_cmd->add_option("--manifest", manifest_path, "JSON-lines evaluation manifest")->required();
  eval_cmd->add_option("--json", json_out, "also write the statistics as JSON");
  add_settings(eval_cmd, settings);

  // model inspect
  auto* model_cmd = app.add_subcommand("model", "Model file utilities");
  model_cmd->require_subcommand(1);
  auto* inspect_cmd = model_cmd->add_subcommand("inspect", "Print the model header as JSON");
  inspect_cmd->add_option("--model", model_path, "model file")->required();

  // synth
  SampleCorpusOptions corpus;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sample corpus");
  synth_cmd->add_option("--outdir", outdir, "output directory")->required();
  synth_cmd->add_option("--high", corpus.high_count, "vivid images")->capture_default_str();
  synth_cmd->add_option("--low", corpus.low_count, "dull images")->capture_default_str();
  synth_cmd->add_option("--seed", corpus.seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--width", corpus.scene.width, "image width")->capture_default_str();
  synth_cmd->add_option("--height", corpus.scene.height, "image height")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bins_cmd) {
      const Config config = settings.resolve();
      const auto raw = sweep_hue_boundaries(config.hue_sweep());
      const HueBinTable table = derive_hue_bins(config.hue_sweep());
      save_hue_bins(table, bins_out);
      std::printf("sweep boundaries: %zu\nhue bins: %zu\n", raw.size(), table.bin_count());
      const auto sep = table.separations();
      std::printf("separations (deg):");
      for (double s : sep) std::printf(" %g", s);
      std::printf("\nmin %g, max %g\n", *std::min_element(sep.begin(), sep.end()),
                  *std::max_element(sep.begin(), sep.end()));
    } else if (*index_cmd) {
      const Config config = settings.resolve();
      const HueBinTable bins = bins_for(config, bins_in);
      const auto manifest = load_corpus_manifest(manifest_path);
      IndexBuildResult built = build_index(manifest, bins, {config.canonical_size, config.worker_count()});
      print_warnings(built.warnings);
      save_index(built.index, index_path);
      std::printf("indexed %zu images (%zu skipped) -> %s\n", built.index.entries.size(), built.skipped,
                  index_path.c_str());
    } else if (*train_cmd) {
      const Config config = settings.resolve();
      const Variant variant = parse_variant(variant_text);
      const CorpusIndex index = load_index(index_path);
      const auto lows = select_quality(load_corpus_manifest(queries_path), Quality::Low);
      if (lows.empty()) {
        throw Error(ErrorKind::EmptyInput, "ranking", "no training pairs: the query manifest lists no low-quality images");
      }
      const auto queries = load_queries(lows, index.hue_bins, config);
      if (queries.empty()) throw Error(ErrorKind::EmptyInput, "ranking", "no training pairs: no readable queries");
      PairSet pairs = build_training_pairs(queries, index, variant, config.pair_options());
      print_warnings(pairs.warnings);
      const TrainResult result = train(pairs.pairs, variant, config.train_options(), index.hue_bins);
      save_model(result.model, model_path);
      std::printf("pairs: %zu\nobjective: %.6g -> %.6g\nconstraints satisfied: %.4f\nmodel -> %s\n",
                  pairs.pairs.size(), result.initial_objective, result.final_objective, result.satisfaction,
                  model_path.c_str());
    } else if (*enhance_cmd) {
      const Config config = settings.resolve();
      const RankingModel model = load_model(model_path);
      const CorpusIndex index = load_index(index_path);
      const RgbImage img = load_image(input_path);
      const CandidateReport report = enhance(img, model, index, config.seed, config.enhance_options());
      print_warnings(report.warnings);
      save_image(report.chosen, output_path);
      if (!dump_scores.empty()) write_file_atomic(dump_scores, candidates_csv(report), "enhance");
      std::printf("candidates: %zu\noriginal score: %.9g\nchosen score: %.9g\nchosen: %s\n",
                  report.candidates.size(), report.original_score, report.chosen_score,
                  report.chosen_index ? ("candidate " + std::to_string(*report.chosen_index)).c_str() : "original");
      if (report.chosen_index) {
        const auto& c = report.candidates[*report.chosen_index];
        std::printf("target (s,b,c): %.4f %.4f %.4f\nachieved (s,b,c): %.4f %.4f %.4f\n", c.target.s, c.target.b,
                    c.target.c, c.achieved.s, c.achieved.b, c.achieved.c);
      }
    } else if (*degrade_cmd) {
      const Config config = settings.resolve();
      const RgbImage img = load_image(input_path);
      fs::create_directories(outdir);
      const auto versions = degraded_versions(img, config.degradation);
      const std::string stem = fs::path(input_path).stem().string();
      for (std::size_t i = 0; i < versions.size(); ++i) {
        const fs::path out = fs::path(outdir) / (stem + "_degraded_" + std::to_string(i + 1) + ".png");
        save_image(versions[i], out);
        std::printf("%s\n", out.c_str());
      }
    } else if (*score_cmd) {
      const Config config = settings.resolve();
      const RankingModel model = load_model(model_path);
      if (!bins_in.empty() && !load_hue_bins(bins_in).matches(model.hue_bins)) {
        throw Error(ErrorKind::DimensionMismatch, "ranking",
                    "dimension mismatch: hue-bin table differs from the one the model was trained with");
      }
      const FeatureBlock fb = extract_features(load_image(input_path), model.hue_bins, config.canonical_size);
      std::printf("%.12g\n", score(model, fb));
    } else if (*retrieve_cmd) {
      const Config config = settings.resolve();
      const CorpusIndex index = load_index(index_path);
      const RetrievalResult result = retrieve(index, load_image(input_path), k == 0 ? config.k_retrieve : k);
      print_warnings(result.warnings);
      for (std::size_t r = 0; r < result.hits.size(); ++r) {
        const auto& e = index.entries[result.hits[r].entry];
        std::printf("%zu\t%lld\t%.6f\t%s\n", r + 1, static_cast<long long>(e.id), result.hits[r].distance,
                    e.path.c_str());
      }
    } else if (*eval_cmd) {
      const Config config = settings.resolve();
      const RankingModel model = load_model(model_path);
      const VerificationStats stats =
          verify(model, load_eval_manifest(manifest_path), {config.canonical_size, config.worker_count()});
      print_warnings(stats.warnings);
      std::printf("%s", stats_table(stats).c_str());
      if (!json_out.empty()) write_file_atomic(json_out, stats_json(stats) + "\n", "evaluate");
    } else if (*inspect_cmd) {
      std::printf("%s\n", model_header_json(load_model(model_path)).c_str());
    } else if (*synth_cmd) {
      const auto entries = write_sample_corpus(outdir, corpus);
      std::printf("wrote %zu images and manifest.jsonl to %s\n", entries.size(), outdir.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s] %s: %s\n", e.module().c_str(), std::string(to_string(e.kind())).c_str(),
                 e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
