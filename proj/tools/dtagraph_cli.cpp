// dtagraph: featurize, train, evaluate, ablate and analyze drug-target
// affinity models from the command line.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dtagraph/analysis.hpp"
#include "dtagraph/checkpoint.hpp"
#include "dtagraph/dataset.hpp"
#include "dtagraph/error.hpp"
#include "dtagraph/feature_cache.hpp"
#include "dtagraph/hashing.hpp"
#include "dtagraph/molecule.hpp"
#include "dtagraph/run_config.hpp"
#include "dtagraph/structure_fetch.hpp"
#include "dtagraph/trainer.hpp"

namespace fs = std::filesystem;
using namespace dtagraph;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void log(const std::string& msg) { std::cerr << msg << '\n'; }

RunConfig load_config(const fs::path& file, const Globals& g) {
  auto c = load_run_config(file);
  if (g.seed) apply_seed(c, *g.seed);
  return c;
}

dataset::Dataset load_filtered(const RunConfig& c) {
  auto ds = dataset::load_dataset_dir(c.dataset_dir);
  if (c.min_interactions) {
    ds = dataset::filter_min_interactions(ds, *c.min_interactions);
    log("filtered to " + std::to_string(ds.drugs().size()) + " drugs, " + std::to_string(ds.proteins().size()) +
        " proteins, " + std::to_string(ds.examples().size()) + " examples");
  }
  return ds;
}

features::FeatureStore featurize(const dataset::Dataset& ds, const fs::path& structures,
                                 const std::optional<fs::path>& cache, unsigned threads) {
  features::FeaturizeStats stats;
  auto store = features::featurize_dataset(ds, {structures, cache, threads}, &stats);
  log("featurized " + std::to_string(stats.proteins_computed) + " proteins (" + std::to_string(stats.proteins_cached) +
      " cached), " + std::to_string(stats.drugs_computed) + " drugs (" + std::to_string(stats.drugs_cached) +
      " cached)");
  if (stats.dropped_residues > 0)
    log("warning: dropped " + std::to_string(stats.dropped_residues) + " nonstandard residues");
  if (stats.clamped_counts > 0)
    log("warning: " + std::to_string(stats.clamped_counts) + " atom counts above 10 clamped");
  return store;
}

int cmd_fetch(const fs::path& proteins_file, const fs::path& cache, const std::string& base_url, const Globals& g) {
  const auto proteins = dataset::load_proteins(proteins_file);
  std::vector<std::string> accessions;
  for (const auto& p : proteins) accessions.push_back(p.uniprot_accession);
  dataset::FetchOptions opts;
  if (!base_url.empty()) opts.base_url = base_url;
  dataset::StructureFetcher fetcher(dataset::make_http_client(), opts);
  const auto outcomes = fetcher.fetch_all(accessions, cache, std::max(1u, g.threads));
  int failures = 0;
  for (const auto& o : outcomes) {
    if (o.path) {
      std::cout << o.accession << '\t' << o.path->string() << '\n';
    } else {
      ++failures;
      std::cerr << o.accession << "\tERROR\t" << o.error << '\n';
    }
  }
  log(std::to_string(outcomes.size() - failures) + " structures available, " + std::to_string(failures) + " failed, " +
      std::to_string(fetcher.request_count()) + " requests");
  return failures == 0 ? 0 : 1;
}

int cmd_featurize(const fs::path& dataset_dir, const fs::path& cache, std::optional<fs::path> structures,
                  const Globals& g) {
  const auto ds = dataset::load_dataset_dir(dataset_dir);
  featurize(ds, structures.value_or(dataset_dir / "structures"), cache, g.threads);
  std::cout << "feature version " << features::featurization_version() << '\n';
  return 0;
}

int cmd_export(const fs::path& dataset_dir, std::optional<fs::path> structures, std::optional<int> min_interactions,
               const fs::path& out) {
  auto ds = dataset::load_dataset_dir(dataset_dir);
  if (min_interactions) ds = dataset::filter_min_interactions(ds, *min_interactions);
  const auto manifest = dataset::export_curated_bundle(ds, structures.value_or(dataset_dir / "structures"), out);
  log("exported " + std::to_string(ds.drugs().size()) + " drugs, " + std::to_string(ds.proteins().size()) +
      " proteins, " + std::to_string(ds.examples().size()) + " examples");
  std::cout << manifest.string() << '\n';
  return 0;
}

void write_config_echo(const fs::path& out, const nlohmann::json& echo) {
  write_file_atomic(out / "config.json", echo.dump(2) + "\n");
}

int cmd_train(const fs::path& config_file, const fs::path& out, bool keep_best, const Globals& g) {
  auto cfg = load_config(config_file, g);
  if (keep_best) cfg.train.keep_best = true;
  fs::create_directories(out);
  const auto ds = load_filtered(cfg);
  const auto split = dataset::split_dataset(ds, cfg.split);
  write_dataset_dir(split.train, out / "train");
  write_dataset_dir(split.test, out / "test");
  const auto store = featurize(ds, cfg.structure_dir, cfg.cache_dir, g.threads);

  const auto echo = to_json(cfg);
  write_config_echo(out, echo);
  nn::Model model(cfg.model);
  log("model parameters: " + std::to_string(model.parameter_count()));
  training::TrainOptions opts;
  opts.checkpoint_path = out / "checkpoint.bin";
  opts.checkpoint_metadata = {{"config", echo},
                              {"structures", cfg.structure_dir.string()},
                              {"cache", cfg.cache_dir ? cfg.cache_dir->string() : std::string()}};
  opts.on_epoch = [&](int epoch, double loss) {
    std::fprintf(stderr, "epoch %d/%d train_mse %.6f\n", epoch + 1, cfg.train.epochs, loss);
  };
  const auto history = training::train(model, split.train, store, cfg.train, opts);
  training::write_history_csv(out / "history.csv", history);

  const auto eval = training::evaluate(model, split.test, store, static_cast<std::size_t>(cfg.train.batch_size));
  training::write_predictions_csv(out / "predictions.csv", eval.predictions);
  training::write_metrics_json(out / "metrics.json", eval.report, echo, cfg.train.epochs);
  std::cout << training::to_json(eval.report).dump() << '\n';
  return 0;
}

int cmd_evaluate(const fs::path& checkpoint, const fs::path& test_dir, const fs::path& out,
                 std::optional<fs::path> structures, std::optional<fs::path> cache, const Globals& g) {
  auto loaded = load_checkpoint(checkpoint, features::featurization_version());
  const auto& meta = loaded.metadata;
  if (!structures) {
    if (fs::exists(test_dir / "structures")) structures = test_dir / "structures";
    else if (meta.contains("structures")) structures = fs::path(meta.at("structures").get<std::string>());
    else throw InvalidArgument("no structure directory given (use --structures)");
  }
  if (!cache && meta.contains("cache") && !meta.at("cache").get<std::string>().empty())
    cache = fs::path(meta.at("cache").get<std::string>());
  const auto test = dataset::load_dataset_dir(test_dir);
  const auto store = featurize(test, *structures, cache, g.threads);
  const int batch = meta.contains("train_config") ? meta["train_config"].value("batch_size", 512) : 512;
  const auto eval = training::evaluate(loaded.model, test, store, static_cast<std::size_t>(batch));
  fs::create_directories(out);
  training::write_predictions_csv(out / "predictions.csv", eval.predictions);
  nlohmann::json echo = meta.value("config", nlohmann::json::object());
  echo["checkpoint"] = checkpoint.string();
  training::write_metrics_json(out / "metrics.json", eval.report, echo, meta.value("epochs_completed", 0));
  std::cout << training::to_json(eval.report).dump() << '\n';
  return 0;
}

int cmd_ablate(const fs::path& config_file, const fs::path& out, const Globals& g) {
  const auto cfg = load_config(config_file, g);
  fs::create_directories(out);
  const auto ds = load_filtered(cfg);
  const auto split = dataset::split_dataset(ds, cfg.split);
  const auto store = featurize(ds, cfg.structure_dir, cfg.cache_dir, g.threads);
  const auto echo = to_json(cfg);
  write_config_echo(out, echo);

  analysis::AblationOptions opts;
  opts.on_row = [](const analysis::AblationRow& r) {
    const auto label = nn::branch_set_label(r.removed);
    if (!r.error.empty()) {
      log("removed " + label + ": FAILED " + r.error);
      return;
    }
    std::fprintf(stderr, "removed %s: train_mse %.6f", label.c_str(), r.train_mse.value_or(NAN));
    if (r.test) std::fprintf(stderr, " test CI %.4f MSE %.4f", r.test->ci, r.test->mse);
    std::fprintf(stderr, "\n");
  };
  const auto rows = analysis::run_ablation_matrix(cfg.model, cfg.train, split.train, split.test, store, opts);
  analysis::write_ablation_csv(out / "ablation.csv", rows);

  nlohmann::json detail = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"removed", nn::branch_set_label(r.removed)},
                     {"model", nn::to_json(r.config)},
                     {"train", training::to_json(r.train_config)},
                     {"split", echo["split"]}};
    if (r.test) j["test"] = training::to_json(*r.test);
    if (r.train_mse) j["train_mse"] = *r.train_mse;
    if (r.history) j["history"] = r.history->train_mse;
    if (!r.error.empty()) j["error"] = r.error;
    detail.push_back(std::move(j));
  }
  write_file_atomic(out / "ablation.json", detail.dump(2) + "\n");
  std::cout << read_file(out / "ablation.csv");
  bool any_failed = false;
  for (const auto& r : rows) any_failed |= !r.error.empty();
  return any_failed ? 1 : 0;
}

int cmd_analyze(const fs::path& predictions, const fs::path& out, std::optional<fs::path> drugs_file,
                const std::string& mode_name) {
  const auto mode = analysis::parse_error_mode(mode_name);
  const auto preds = training::read_predictions_csv(predictions);
  std::vector<analysis::ErrorBreakdown> breakdowns{analysis::error_by_entity(preds, analysis::EntityKind::Drug, mode),
                                                   analysis::error_by_entity(preds, analysis::EntityKind::Protein, mode)};
  std::vector<analysis::PropertyScatter> scatters;
  if (drugs_file) {
    std::map<std::string, chem::MoleculeCounts> counts;
    for (const auto& d : dataset::load_drugs(*drugs_file))
      counts.emplace(d.drug_id, chem::molecule_counts(chem::parse_smiles(d.smiles)));
    for (auto p : analysis::kAllProperties) scatters.push_back(analysis::error_vs_property(preds, counts, p, mode));
  }
  const auto images = analysis::emit_plots(breakdowns, scatters, out);
  nlohmann::json summary;
  summary["error_mode"] = std::string(analysis::error_mode_name(mode));
  summary["predictions"] = preds.size();
  for (const auto& s : scatters)
    summary["pearson_r"][std::string(analysis::property_name(s.property))] =
        s.pearson_r ? nlohmann::json(*s.pearson_r) : nlohmann::json(nullptr);
  for (const auto& b : breakdowns) {
    auto& top = summary["top"][std::string(analysis::entity_kind_name(b.entity_kind))];
    top = nlohmann::json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(10, b.rows.size()); ++i)
      top.push_back({{"id", b.rows[i].entity_id}, {"total_error", b.rows[i].total_error}});
  }
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  for (const auto& img : images) std::cout << img.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drug-target affinity regression with structure graphs and fingerprints"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override split, model and training seeds");
  app.add_option("--threads", g.threads, "Worker threads for featurization and downloads")
      ->check(CLI::PositiveNumber);

  fs::path proteins, cache, dataset_dir, config, out, checkpoint, test_dir, predictions;
  std::optional<fs::path> structures, drugs, eval_cache;
  std::string base_url, error_mode = "abs";
  bool keep_best = false;

  auto* fetch = app.add_subcommand("fetch-structures", "Download predicted structures for every protein");
  fetch->add_option("--proteins", proteins, "proteins.tsv")->required();
  fetch->add_option("--cache", cache, "Structure cache directory")->required();
  fetch->add_option("--base-url", base_url, "Structure server base URL");

  auto* feat = app.add_subcommand("featurize", "Compute and cache graph and fingerprint features");
  feat->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  feat->add_option("--cache", cache, "Feature cache directory")->required();
  feat->add_option("--structures", structures, "Structure directory (default: <dataset>/structures)");

  std::optional<int> min_interactions;
  auto* bundle = app.add_subcommand("export-bundle", "Write the dataset and its structures with a checksum manifest");
  bundle->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  bundle->add_option("--structures", structures, "Structure directory (default: <dataset>/structures)");
  bundle->add_option("--min-interactions", min_interactions, "Apply the interaction filter first")
      ->check(CLI::PositiveNumber);
  bundle->add_option("--out", out, "Bundle directory")->required();

  auto* train = app.add_subcommand("train", "Train on the configured split and evaluate on its test part");
  train->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out, "Output directory")->required();
  train->add_flag("--keep-best", keep_best, "Restore the lowest-train-loss epoch at the end");

  auto* eval = app.add_subcommand("evaluate", "Evaluate a checkpoint on a dataset directory");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval->add_option("--test", test_dir, "Dataset directory")->required();
  eval->add_option("--out", out, "Output directory")->required();
  eval->add_option("--structures", structures, "Structure directory");
  eval->add_option("--cache", eval_cache, "Feature cache directory");

  auto* ablate = app.add_subcommand("ablate", "Run the seven-row branch ablation matrix");
  ablate->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  ablate->add_option("--out", out, "Output directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Error attribution by entity and molecular property");
  analyze->add_option("--predictions", predictions, "predictions.csv")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", out, "Output directory")->required();
  analyze->add_option("--drugs", drugs, "drugs.tsv, enables the property scatters");
  analyze->add_option("--error-mode", error_mode, "abs (default) or sq")->check(CLI::IsMember({"abs", "sq"}));

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;

  try {
    if (*fetch) return cmd_fetch(proteins, cache, base_url, g);
    if (*feat) return cmd_featurize(dataset_dir, cache, structures, g);
    if (*bundle) return cmd_export(dataset_dir, structures, min_interactions, out);
    if (*train) return cmd_train(config, out, keep_best, g);
    if (*eval) return cmd_evaluate(checkpoint, test_dir, out, structures, eval_cache, g);
    if (*ablate) return cmd_ablate(config, out, g);
    if (*analyze) return cmd_analyze(predictions, out, drugs, error_mode);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
